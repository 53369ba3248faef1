#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gcnet/error.hpp"
#include "gcnet/ingestion.hpp"

using gcnet::Date;

namespace {

gcnet::PricePanel parse(const std::string& text) {
  std::istringstream in(text);
  return gcnet::parse_prices(in);
}

std::string message_of(const std::string& text) {
  try {
    parse(text);
  } catch (const gcnet::InputError& e) {
    return e.what();
  }
  return "";
}

gcnet::FxSeries fx(const std::string& pair, std::vector<Date> dates, std::vector<double> rates) {
  gcnet::FxSeries s;
  s.pair = pair;
  s.dates = std::move(dates);
  s.rates = std::move(rates);
  return s;
}

gcnet::PriceSeries series(const std::string& id, const std::string& ccy, std::vector<Date> dates,
                          std::vector<double> closes) {
  gcnet::PriceSeries s;
  s.market_id = id;
  s.currency = ccy;
  s.dates = std::move(dates);
  s.closes = std::move(closes);
  return s;
}

const Date d2 = Date::from_ymd(2006, 1, 2), d3 = d2 + 1, d4 = d2 + 2;

}  // namespace

TEST(Prices, ThreeRows) {
  auto panel = parse("date,DAX\n2006-01-02,100\n2006-01-03,101\n2006-01-04,102\n");
  ASSERT_EQ(panel.size(), 1u);
  EXPECT_EQ(panel[0].market_id, "DAX");
  EXPECT_EQ(panel[0].size(), 3u);
  EXPECT_EQ(panel[0].dates[2], d4);
  EXPECT_DOUBLE_EQ(panel[0].closes[1], 101.0);
}

TEST(Prices, ZeroPriceNamesRow) {
  EXPECT_NE(message_of("date,A\n2006-01-02,100\n2006-01-03,0\n").find("non-positive price at row 2"),
            std::string::npos);
  EXPECT_NE(message_of("date,A\n2006-01-02,-5\n").find("non-positive price at row 1"), std::string::npos);
}

TEST(Prices, DuplicateDate) {
  EXPECT_NE(message_of("date,A\n2006-01-03,100\n2006-01-03,101\n").find("duplicate date"), std::string::npos);
}

TEST(Prices, MalformedDateNamesRow) {
  EXPECT_NE(message_of("date,A\n2006-01-02,100\n03/01/2006,101\n").find("row 2"), std::string::npos);
}

TEST(Prices, MissingCellsBecomeAbsentDates) {
  auto panel = parse("date,A,B\n2006-01-02,1,\n2006-01-03,NA,2\n2006-01-04,3,4\n");
  ASSERT_EQ(panel.size(), 2u);
  EXPECT_EQ(panel[0].dates, (std::vector<Date>{d2, d4}));
  EXPECT_EQ(panel[1].dates, (std::vector<Date>{d3, d4}));
}

TEST(Prices, SchemaSelectsColumns) {
  std::istringstream in("day,A,B\n2006-01-02,1,2\n");
  gcnet::PriceCsvSchema schema;
  schema.date_column = "day";
  schema.markets = {"B"};
  auto panel = gcnet::parse_prices(in, schema);
  ASSERT_EQ(panel.size(), 1u);
  EXPECT_EQ(panel[0].market_id, "B");
  schema.markets = {"C"};
  std::istringstream again("day,A,B\n2006-01-02,1,2\n");
  EXPECT_THROW(gcnet::parse_prices(again, schema), gcnet::InputError);
}

TEST(Prices, RoundTripIsIdentity) {
  auto panel = parse("date,A,B\n2006-01-02,1.1,\n2006-01-03,0.30000000000000004,2e-7\n2006-01-04,3,123456.789\n");
  std::ostringstream out;
  gcnet::write_prices(out, panel);
  auto back = parse(out.str());
  ASSERT_EQ(back.size(), panel.size());
  for (std::size_t k = 0; k < panel.size(); ++k) {
    EXPECT_EQ(back[k].market_id, panel[k].market_id);
    EXPECT_EQ(back[k].dates, panel[k].dates);
    EXPECT_EQ(back[k].closes, panel[k].closes);
  }
}

TEST(Fx, MultipliesBaseQuote) {
  auto s = series("DAX", "EUR", {d2}, {100.0});
  auto usd = gcnet::convert_to_usd(s, fx("EURUSD", {d2}, {1.25}));
  EXPECT_DOUBLE_EQ(usd.closes[0], 125.0);
  EXPECT_EQ(usd.currency, "USD");
}

TEST(Fx, DividesUsdBase) {
  auto s = series("N225", "JPY", {d2}, {11000.0});
  auto usd = gcnet::convert_to_usd(s, fx("USDJPY", {d2}, {110.0}));
  EXPECT_DOUBLE_EQ(usd.closes[0], 100.0);
}

TEST(Fx, UsdIsIdentity) {
  auto s = series("SPX", "USD", {d2, d3}, {1.0, 2.0});
  auto usd = gcnet::convert_to_usd(s, fx("EURUSD", {}, {}));
  EXPECT_EQ(usd.dates, s.dates);
  EXPECT_EQ(usd.closes, s.closes);
}

TEST(Fx, MissingDateListed) {
  auto s = series("DAX", "EUR", {d2, d3, d4}, {1.0, 2.0, 3.0});
  const auto rates = fx("EURUSD", {d2, d4}, {1.1, 1.2});
  try {
    gcnet::convert_to_usd(s, rates);
    FAIL() << "expected an error";
  } catch (const gcnet::InputError& e) {
    EXPECT_NE(std::string(e.what()).find("2006-01-03"), std::string::npos);
  }
  auto dropped = gcnet::convert_to_usd_dropping(s, rates);
  EXPECT_EQ(dropped.dropped, std::vector<Date>{d3});
  EXPECT_EQ(dropped.series.dates, (std::vector<Date>{d2, d4}));
}

TEST(Fx, CommutesWithSlicing) {
  auto s = series("DAX", "EUR", {d2, d3, d4, d4 + 1}, {1.0, 2.0, 3.0, 4.0});
  const auto rates = fx("EURUSD", {d2, d3, d4, d4 + 1}, {1.1, 1.2, 1.3, 1.4});
  auto a = gcnet::convert_to_usd(s, rates).slice(d3, d4 + 1);
  auto b = gcnet::convert_to_usd(s.slice(d3, d4 + 1), rates);
  EXPECT_EQ(a.dates, b.dates);
  EXPECT_EQ(a.closes, b.closes);
}

TEST(Fx, ParsesCsv) {
  std::istringstream in("date,pair,rate\n2006-01-02,EURUSD,1.2\n2006-01-02,USDJPY,116\n2006-01-03,EURUSD,1.21\n");
  auto all = gcnet::parse_fx(in);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all.at("EURUSD").rates.size(), 2u);
  EXPECT_EQ(gcnet::find_usd_pair(all, "JPY").pair, "USDJPY");
  EXPECT_THROW(gcnet::find_usd_pair(all, "GBP"), gcnet::InputError);
}

TEST(Metadata, ParseAndRoundTrip) {
  const char* text = R"(
# closing hours
market DAX {
  timezone = "Europe/Berlin"
  currency = "EUR"
  epoch { from = 2000-01-01, to = 2006-06-30, close_local = "17:30", auction = fixed }
  epoch { from = 2006-07-01, to = 2013-12-31, close_local = "17:30", auction = window:5 }
}
market SPX {
  timezone = "America/New_York"
  epoch { from = 2000-01-01, to = 2013-12-31, close_local = "16:00", auction = last }
}
)";
  auto clocks = gcnet::parse_market_metadata(text);
  ASSERT_EQ(clocks.size(), 2u);
  const auto& dax = clocks.at("DAX");
  EXPECT_EQ(dax.currency, "EUR");
  ASSERT_EQ(dax.epochs.size(), 2u);
  EXPECT_EQ(dax.epochs[1].auction, gcnet::AuctionPolicy::kPostAuctionWindow);
  EXPECT_EQ(dax.epochs[1].effective_close_minutes(), 17 * 60 + 35);
  EXPECT_EQ(clocks.at("SPX").currency, "USD");

  std::ostringstream out;
  gcnet::write_market_metadata(out, clocks);
  auto back = gcnet::parse_market_metadata(out.str());
  std::ostringstream again;
  gcnet::write_market_metadata(again, back);
  EXPECT_EQ(out.str(), again.str());
}

TEST(Metadata, RejectsGapsAndBadTimes) {
  EXPECT_THROW(gcnet::parse_market_metadata(R"(market A { timezone = "UTC"
    epoch { from = 2000-01-01, to = 2000-06-30, close_local = "16:00", auction = last }
    epoch { from = 2000-07-02, to = 2000-12-31, close_local = "16:00", auction = last } })"),
               gcnet::InputError);
  EXPECT_THROW(gcnet::parse_market_metadata(R"(market A { timezone = "UTC"
    epoch { from = 2000-01-01, to = 2000-06-30, close_local = "25:00", auction = last } })"),
               gcnet::InputError);
  EXPECT_THROW(gcnet::parse_market_metadata(R"(market A { timezone = "UTC" colour = "red" })"), gcnet::InputError);
}

TEST(UtcClose, ExamplesAndCoverage) {
  gcnet::MarketClock c;
  c.market_id = "FTSE";
  c.timezone_id = "Europe/London";
  c.epochs.push_back({Date::from_ymd(2006, 1, 1), Date::from_ymd(2006, 12, 31), 16 * 60,
                      gcnet::AuctionPolicy::kLastPrice, 0});
  EXPECT_EQ(gcnet::utc_close_instant(c, Date::from_ymd(2006, 1, 10)),
            gcnet::utc_minute(Date::from_ymd(2006, 1, 10), 16 * 60));
  EXPECT_EQ(gcnet::utc_close_instant(c, Date::from_ymd(2006, 7, 10)),
            gcnet::utc_minute(Date::from_ymd(2006, 7, 10), 15 * 60));
  EXPECT_THROW(gcnet::utc_close_instant(c, Date::from_ymd(2005, 12, 30)), gcnet::DomainError);
}

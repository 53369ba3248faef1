#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gcnet/alignment.hpp"
#include "gcnet/error.hpp"
#include "gcnet/pipeline.hpp"
#include "gcnet/simulate.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

gcnet::SyntheticSpec small_spec() {
  gcnet::SyntheticSpec s;
  s.markets = {{"US", "America/New_York", 16 * 60},
               {"UK", "Europe/London", 16 * 60 + 30},
               {"JP", "Asia/Tokyo", 15 * 60},
               {"DE", "Europe/Berlin", 17 * 60 + 30}};
  s.edges = {{0, 2, 0.4}, {0, 3, 0.3}};
  s.start = gcnet::Date::from_ymd(2006, 1, 2);
  s.end = gcnet::Date::from_ymd(2006, 6, 30);
  return s;
}

gcnet::StudyConfig small_config(const fs::path& dir) {
  gcnet::write_panel(gcnet::simulate_panel(small_spec(), 99), dir.string());
  gcnet::StudyConfig c;
  c.prices = (dir / "prices.csv").string();
  c.metadata = (dir / "markets.meta").string();
  c.output = (dir / "out").string();
  c.families = {gcnet::VarianceFamily::kGarch};
  c.order_max = 1;
  c.starts = 1;
  c.diagnostic_replications = 40;
  c.probit_draws = 60;
  c.probit_burn_in = 20;
  return c;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("gcnet_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Windows, CalendarCount) {
  using gcnet::Date;
  const auto w = gcnet::make_windows(Date::from_ymd(2006, 1, 1), Date::from_ymd(2013, 12, 31), 3, 1);
  ASSERT_EQ(w.size(), 94u);
  EXPECT_EQ(w.front().index, 1);
  EXPECT_EQ(w.front().from, Date::from_ymd(2006, 1, 1));
  EXPECT_EQ(w.front().to, Date::from_ymd(2006, 4, 1));
  EXPECT_EQ(w.back().from, Date::from_ymd(2013, 10, 1));
  EXPECT_EQ(w.back().to, Date::from_ymd(2014, 1, 1));
  EXPECT_EQ(gcnet::make_windows(Date::from_ymd(2006, 1, 1), Date::from_ymd(2006, 3, 31), 3, 1).size(), 1u);
  EXPECT_THROW(gcnet::make_windows(Date::from_ymd(2006, 1, 1), Date::from_ymd(2006, 2, 28), 3, 1),
               gcnet::DomainError);
  EXPECT_THROW(gcnet::make_windows(Date::from_ymd(2006, 5, 1), Date::from_ymd(2006, 1, 1), 3, 1),
               gcnet::DomainError);
}

TEST(Windows, TradingDays) {
  std::vector<gcnet::Date> d;
  for (int k = 0; k < 100; ++k) d.push_back(gcnet::Date(13000 + k));
  const auto w = gcnet::make_trading_windows(d, 40, 20);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_EQ(w[1].from, d[20]);
  EXPECT_EQ(w[1].to, d[60]);
}

TEST(Config, RejectsUnknownKeysAndRoundTrips) {
  EXPECT_THROW(gcnet::parse_config(R"({"prices": "p.csv", "bandwidht": 5})"), gcnet::InputError);
  EXPECT_THROW(gcnet::parse_config(R"({"bandwidth": "five"})"), gcnet::InputError);
  auto c = gcnet::parse_config(R"({"prices": "p.csv", "metadata": "m.meta", "bandwidth": 7, "level": 0.05})");
  EXPECT_EQ(c.bandwidth, 7);
  const auto back = gcnet::parse_config(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(back.hash(), c.hash());
  c.bandwidth = 6;
  EXPECT_NE(back.hash(), c.hash());
}

TEST(Simulate, CycleRejectedAndDeterministic) {
  auto s = small_spec();
  s.end = gcnet::Date::from_ymd(2006, 2, 28);
  const auto a = gcnet::simulate_panel(s, 5), b = gcnet::simulate_panel(s, 5);
  std::ostringstream pa, pb;
  gcnet::write_prices(pa, a.prices);
  gcnet::write_prices(pb, b.prices);
  EXPECT_EQ(pa.str(), pb.str());

  // US and CA close at the same instant: a two-way link is a cycle
  gcnet::SyntheticSpec cyc;
  cyc.markets = {{"US", "America/New_York", 960}, {"CA", "America/Toronto", 960}};
  cyc.edges = {{0, 1, 0.2}, {1, 0, 0.2}};
  cyc.end = gcnet::Date::from_ymd(2006, 1, 31);
  EXPECT_THROW(gcnet::simulate_panel(cyc, 1), gcnet::DomainError);
}

TEST(Simulate, LaterCloseSeesSameDayReturn) {
  // A closes 16:00 NY, B 15:00 NY: B's day-t return can only reach A on day t.
  gcnet::SyntheticSpec s;
  s.markets = {{"A", "America/New_York", 960}, {"B", "America/New_York", 900}};
  s.edges = {{1, 0, 0.9}};
  s.holiday_rate = 0.0;
  s.end = gcnet::Date::from_ymd(2007, 12, 31);
  const auto p = gcnet::simulate_panel(s, 3);
  const auto& a = p.prices.at(0);
  const auto& b = p.prices.at(1);
  const auto ra = gcnet::compute_returns(a, a.dates), rb = gcnet::compute_returns(b, b.dates);
  ASSERT_EQ(ra.values.size(), rb.values.size());
  double same = 0, lag = 0;
  for (std::size_t t = 1; t < ra.values.size(); ++t) {
    same += ra.values[t] * rb.values[t];
    lag += ra.values[t] * rb.values[t - 1];
  }
  EXPECT_GT(same, 5.0 * std::abs(lag));
}

TEST(Study, StagesAreFileBackedAndRepeatable) {
  const auto dir = scratch("stages");
  auto config = small_config(dir);
  std::ostringstream log;
  const auto report = gcnet::run_study(config, log);
  EXPECT_EQ(report.windows, 4);

  const auto manifest = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  EXPECT_EQ(manifest["totals"]["decisions"].get<int>(), 4 * 4 * 3 - 12 * report.failed_windows);
  EXPECT_EQ(manifest["windows"].size(), 4u);

  const auto w1 = dir / "out" / "windows" / "001";
  const std::string tests = slurp(w1 / "tests.csv"), edges = slurp(w1 / "edges.csv");
  const std::string trends = slurp(dir / "out" / "trends.csv");
  ASSERT_FALSE(tests.empty());

  // rerun from the cached fits only
  fs::remove(w1 / "tests.csv");
  fs::remove(w1 / "edges.csv");
  fs::remove(dir / "out" / "trends.csv");
  const auto inputs = gcnet::load_inputs(config);
  gcnet::run_test_stage(config, inputs, log);
  gcnet::run_network_stage(config, inputs, log);
  gcnet::run_probit_stage(config, inputs, log);
  gcnet::run_report_stage(config, inputs, log);
  EXPECT_EQ(slurp(w1 / "tests.csv"), tests);
  EXPECT_EQ(slurp(w1 / "edges.csv"), edges);
  EXPECT_EQ(slurp(dir / "out" / "trends.csv"), trends);
  fs::remove_all(dir);
}

TEST(Study, MissingInputsFail) {
  gcnet::StudyConfig c;
  c.prices = "/nonexistent/prices.csv";
  c.metadata = "/nonexistent/markets.meta";
  EXPECT_ANY_THROW(gcnet::load_inputs(c));
}

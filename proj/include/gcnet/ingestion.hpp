#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gcnet/date.hpp"
#include "gcnet/tz.hpp"

namespace gcnet {

/// Daily closes of one market; dates strictly increasing, closes positive and finite.
struct PriceSeries {
  std::string market_id;
  std::string currency = "USD";
  std::vector<Date> dates;
  std::vector<double> closes;

  std::size_t size() const { return dates.size(); }
  /// Throws InputError if the ordering or positivity invariants do not hold.
  void validate() const;
  /// Observations with from <= date < to.
  PriceSeries slice(Date from, Date to) const;
};

using PricePanel = std::vector<PriceSeries>;

struct PriceCsvSchema {
  std::string date_column = "date";
  std::vector<std::string> markets;  ///< empty selects every non-date column
  std::map<std::string, std::string> currency;  ///< market -> ISO code, default USD
};

PricePanel load_prices(const std::string& path, const PriceCsvSchema& schema = {});
PricePanel parse_prices(std::istream& in, const PriceCsvSchema& schema = {});
/// Writes the panel in the price CSV layout (union of dates, empty cells for gaps).
void write_prices(std::ostream& out, const PricePanel& panel);

/// Exchange rates for one currency pair. The pair is written BASEQUOTE
/// (e.g. EURUSD = USD per EUR) and the rate is quote units per base unit.
struct FxSeries {
  std::string pair;
  std::vector<Date> dates;
  std::vector<double> rates;

  std::string base() const { return pair.substr(0, 3); }
  std::string quote() const { return pair.substr(3, 3); }
  void validate() const;
};

/// Reads `date,pair,rate` rows; one FxSeries per pair.
std::map<std::string, FxSeries> load_fx(const std::string& path);
std::map<std::string, FxSeries> parse_fx(std::istream& in);

/// Converts closes to USD by exact-date join. Throws InputError listing
/// the dates the FX series does not cover. USD series pass through unchanged.
PriceSeries convert_to_usd(const PriceSeries& series, const FxSeries& fx);

struct UsdConversion {
  PriceSeries series;
  std::vector<Date> dropped;  ///< dates without an FX fixing
};

/// As convert_to_usd but drops uncovered dates instead of failing.
UsdConversion convert_to_usd_dropping(const PriceSeries& series, const FxSeries& fx);

/// Picks the FX series quoting `currency` against USD from a loaded set.
const FxSeries& find_usd_pair(const std::map<std::string, FxSeries>& fx, const std::string& currency);

// ---------------------------------------------------------------------------
// Closing-hour metadata

enum class AuctionPolicy { kLastPrice, kPostAuctionFixed, kPostAuctionWindow };

struct ClockEpoch {
  Date from;  ///< inclusive
  Date to;    ///< inclusive
  int local_close_minutes = 0;
  AuctionPolicy auction = AuctionPolicy::kLastPrice;
  int window_minutes = 0;

  /// The instant the closing price is fixed, in local minutes after midnight.
  /// Randomized closing windows resolve to the last possible instant.
  int effective_close_minutes() const {
    return auction == AuctionPolicy::kPostAuctionWindow ? local_close_minutes + window_minutes
                                                        : local_close_minutes;
  }
};

struct MarketClock {
  std::string market_id;
  std::string timezone_id;
  std::string currency = "USD";
  std::vector<ClockEpoch> epochs;

  /// Throws InputError unless epochs are ordered and contiguous.
  void validate() const;
  /// The epoch covering `date`; throws DomainError if none does.
  const ClockEpoch& epoch_for(Date date) const;
  bool covers(Date date) const;
};

using ClockSet = std::map<std::string, MarketClock, std::less<>>;

/// UTC instant of the market's effective close on `date`, DST-aware.
UtcMinute utc_close_instant(const MarketClock& clock, Date date,
                            const TzDatabase& tz = TzDatabase::pinned());

ClockSet load_market_metadata(const std::string& path);
ClockSet parse_market_metadata(std::string_view text);
void write_market_metadata(std::ostream& out, const ClockSet& clocks);

}  // namespace gcnet

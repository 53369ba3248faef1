#pragma once

#include <string>
#include <vector>

#include "gcnet/date.hpp"
#include "gcnet/ingestion.hpp"

namespace gcnet {

/// Log returns (or any per-return quantity such as standardized residuals)
/// over a trading calendar. `dates[k]` is the terminal date of `values[k]`;
/// its start date is the calendar predecessor of `dates[k]`.
struct ReturnSeries {
  std::string market_id;
  std::vector<Date> calendar;  ///< retained trading dates
  std::vector<Date> dates;     ///< subset of calendar, ascending
  std::vector<double> values;

  std::size_t size() const { return dates.size(); }
};

/// One aligned observation: source return paired with the target return it may explain.
struct AlignedEntry {
  Date target_date;
  Date source_date;
  double source = 0.0;
  double target = 0.0;
  int shift = 0;
};

struct AlignedPair {
  std::string source_id;
  std::string target_id;
  std::vector<AlignedEntry> entries;
  /// Set when the shift changes inside the sample (a closing-hour or DST
  /// change reorders the two closes).
  bool mixed_shift = false;

  std::size_t length() const { return entries.size(); }
  std::vector<double> source_values() const;
  std::vector<double> target_values() const;
};

/// Trading dates present in both series, in order. Throws DomainError when disjoint.
std::vector<Date> pairwise_calendar(const PriceSeries& a, const PriceSeries& b);

/// Log returns between consecutive retained dates. A return is kept only
/// when no weekday lies strictly between its two dates.
ReturnSeries compute_returns(const PriceSeries& series, const std::vector<Date>& retained_dates);

/// Restricts a series computed on its own calendar to a coarser calendar,
/// keeping only values whose start date is still the calendar predecessor.
ReturnSeries rebase(const ReturnSeries& own, const std::vector<Date>& calendar);

/// Shift applied to the source on `date`: 1 when the source closes at or
/// after the target, 0 when it closes strictly before.
int alignment_shift(const MarketClock& source, const MarketClock& target, Date date,
                    const TzDatabase& tz = TzDatabase::pinned());

/// Pairs the most recent source return available at each target close.
AlignedPair align(const ReturnSeries& source, const ReturnSeries& target, const MarketClock& source_clock,
                  const MarketClock& target_clock, const TzDatabase& tz = TzDatabase::pinned());

/// True when both markets close at the same UTC instant on every date given.
bool closes_coincide(const MarketClock& a, const MarketClock& b, const std::vector<Date>& dates,
                     const TzDatabase& tz = TzDatabase::pinned());

/// Debug dump: `date_j,r_source,r_target,shift`.
void write_aligned(std::ostream& out, const AlignedPair& pair);

}  // namespace gcnet

#include "gcnet/alignment.hpp"

#include <algorithm>
#include <iterator>
#include <cmath>
#include <ostream>

#include "csv.hpp"
#include "gcnet/error.hpp"

namespace gcnet {

std::vector<double> AlignedPair::source_values() const {
  std::vector<double> v;
  v.reserve(entries.size());
  for (const auto& e : entries) v.push_back(e.source);
  return v;
}

std::vector<double> AlignedPair::target_values() const {
  std::vector<double> v;
  v.reserve(entries.size());
  for (const auto& e : entries) v.push_back(e.target);
  return v;
}

std::vector<Date> pairwise_calendar(const PriceSeries& a, const PriceSeries& b) {
  if (a.size() == 0 || b.size() == 0) throw DomainError("pairwise_calendar: empty series");
  std::vector<Date> out;
  std::set_intersection(a.dates.begin(), a.dates.end(), b.dates.begin(), b.dates.end(),
                        std::back_inserter(out));
  if (out.empty()) {
    throw DomainError("markets " + a.market_id + " and " + b.market_id + " share no trading dates");
  }
  return out;
}

ReturnSeries compute_returns(const PriceSeries& series, const std::vector<Date>& retained_dates) {
  if (retained_dates.size() < 2) {
    throw DomainError(series.market_id + ": need at least two retained dates for returns");
  }
  ReturnSeries out;
  out.market_id = series.market_id;
  out.calendar = retained_dates;

  std::vector<double> prices;
  prices.reserve(retained_dates.size());
  std::size_t j = 0;
  for (Date d : retained_dates) {
    while (j < series.size() && series.dates[j] < d) ++j;
    if (j == series.size() || series.dates[j] != d) {
      throw DomainError(series.market_id + ": retained date " + d.iso() + " not in series");
    }
    prices.push_back(series.closes[j]);
  }
  for (std::size_t k = 1; k < retained_dates.size(); ++k) {
    if (!consecutive_trading_days(retained_dates[k - 1], retained_dates[k])) continue;
    out.dates.push_back(retained_dates[k]);
    out.values.push_back(std::log(prices[k] / prices[k - 1]));
  }
  return out;
}

ReturnSeries rebase(const ReturnSeries& own, const std::vector<Date>& calendar) {
  ReturnSeries out;
  out.market_id = own.market_id;
  out.calendar = calendar;
  for (std::size_t k = 1; k < calendar.size(); ++k) {
    const Date end = calendar[k];
    auto it = std::lower_bound(own.dates.begin(), own.dates.end(), end);
    if (it == own.dates.end() || *it != end) continue;
    // The value's own start date must equal the calendar predecessor.
    auto cal = std::lower_bound(own.calendar.begin(), own.calendar.end(), end);
    if (cal == own.calendar.begin()) continue;
    if (*std::prev(cal) != calendar[k - 1]) continue;
    out.dates.push_back(end);
    out.values.push_back(own.values[static_cast<std::size_t>(it - own.dates.begin())]);
  }
  return out;
}

int alignment_shift(const MarketClock& source, const MarketClock& target, Date date, const TzDatabase& tz) {
  return utc_close_instant(source, date, tz) >= utc_close_instant(target, date, tz) ? 1 : 0;
}

AlignedPair align(const ReturnSeries& source, const ReturnSeries& target, const MarketClock& source_clock,
                  const MarketClock& target_clock, const TzDatabase& tz) {
  if (source.calendar != target.calendar) {
    throw DomainError("align: " + source.market_id + " and " + target.market_id +
                      " are not on a common calendar");
  }
  AlignedPair out;
  out.source_id = source.market_id;
  out.target_id = target.market_id;
  const auto& cal = source.calendar;
  int first_shift = -1;

  auto value_at = [](const ReturnSeries& s, Date d) -> const double* {
    auto it = std::lower_bound(s.dates.begin(), s.dates.end(), d);
    if (it == s.dates.end() || *it != d) return nullptr;
    return &s.values[static_cast<std::size_t>(it - s.dates.begin())];
  };

  for (std::size_t k = 0; k < target.dates.size(); ++k) {
    const Date t = target.dates[k];
    if (!source_clock.covers(t) || !target_clock.covers(t)) {
      throw DomainError("align: closing-hour epochs do not cover " + t.iso());
    }
    const int shift = alignment_shift(source_clock, target_clock, t, tz);
    Date src_date = t;
    if (shift == 1) {
      auto pos = std::lower_bound(cal.begin(), cal.end(), t);
      if (pos == cal.begin()) continue;
      src_date = *std::prev(pos);
    }
    const double* src = value_at(source, src_date);
    if (!src) continue;
    if (first_shift < 0) first_shift = shift;
    if (shift != first_shift) out.mixed_shift = true;
    out.entries.push_back({t, src_date, *src, target.values[k], shift});
  }
  return out;
}

bool closes_coincide(const MarketClock& a, const MarketClock& b, const std::vector<Date>& dates,
                     const TzDatabase& tz) {
  for (Date d : dates) {
    if (utc_close_instant(a, d, tz) != utc_close_instant(b, d, tz)) return false;
  }
  return true;
}

void write_aligned(std::ostream& out, const AlignedPair& pair) {
  out << "date_j,r_source,r_target,shift\n";
  for (const auto& e : pair.entries) {
    out << e.target_date.iso() << ',' << csv::fmt(e.source) << ',' << csv::fmt(e.target) << ',' << e.shift << '\n';
  }
}

}  // namespace gcnet

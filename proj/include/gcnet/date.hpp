#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace gcnet {

/// Calendar date stored as days since 1970-01-01 (proleptic Gregorian).
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days) : days_(days) {}

  static Date from_ymd(int year, unsigned month, unsigned day);
  /// Parses `YYYY-MM-DD`; throws InputError on anything else.
  static Date parse(std::string_view text);

  constexpr std::int32_t days() const { return days_; }
  int year() const;
  unsigned month() const;
  unsigned day() const;
  /// 0 = Sunday ... 6 = Saturday.
  unsigned weekday() const;
  bool is_weekend() const { return weekday() == 0 || weekday() == 6; }

  std::string iso() const;

  constexpr Date operator+(std::int32_t n) const { return Date(days_ + n); }
  constexpr Date operator-(std::int32_t n) const { return Date(days_ - n); }
  constexpr std::int32_t operator-(Date other) const { return days_ - other.days_; }
  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

/// True when no weekday lies strictly between `earlier` and `later`
/// (so Friday to Monday counts as consecutive).
bool consecutive_trading_days(Date earlier, Date later);

/// Number of days in the given month.
unsigned days_in_month(int year, unsigned month);

/// First day of the month `months` after the month containing `d`.
Date add_months(Date first_of_month, int months);

/// The n-th (1-based) given weekday of a month, or the last one when n == 0.
Date nth_weekday(int year, unsigned month, unsigned weekday, unsigned n);

}  // namespace gcnet

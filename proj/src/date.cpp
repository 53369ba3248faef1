#include "gcnet/date.hpp"

#include <charconv>
#include <cstdio>

#include "gcnet/error.hpp"

namespace gcnet {

namespace {

// Howard Hinnant's civil-date algorithms.
std::int32_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int>(doe) - 719468;
}

struct Civil {
  int y;
  unsigned m;
  unsigned d;
};

Civil civil_from_days(std::int32_t z) {
  z += 719468;
  const int era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int y = static_cast<int>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

}  // namespace

unsigned days_in_month(int year, unsigned month) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap(year)) return 29;
  return kDays[month - 1];
}

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month)) {
    throw InputError("invalid calendar date " + std::to_string(year) + "-" +
                     std::to_string(month) + "-" + std::to_string(day));
  }
  return Date(days_from_civil(year, month, day));
}

Date Date::parse(std::string_view text) {
  auto bad = [&] { return InputError("malformed date '" + std::string(text) + "'"); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  int y = 0;
  unsigned m = 0, d = 0;
  auto field = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    if (ec != std::errc() || ptr != text.data() + pos + len) throw bad();
  };
  field(0, 4, y);
  field(5, 2, m);
  field(8, 2, d);
  try {
    return from_ymd(y, m, d);
  } catch (const InputError&) {
    throw bad();
  }
}

int Date::year() const { return civil_from_days(days_).y; }
unsigned Date::month() const { return civil_from_days(days_).m; }
unsigned Date::day() const { return civil_from_days(days_).d; }

unsigned Date::weekday() const {
  return static_cast<unsigned>(((days_ % 7) + 11) % 7);
}

std::string Date::iso() const {
  const Civil c = civil_from_days(days_);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", c.y, c.m, c.d);
  return buf;
}

bool consecutive_trading_days(Date earlier, Date later) {
  if (later <= earlier) return false;
  for (Date d = earlier + 1; d < later; d = d + 1) {
    if (!d.is_weekend()) return false;
  }
  return true;
}

Date add_months(Date first_of_month, int months) {
  int total = first_of_month.year() * 12 + static_cast<int>(first_of_month.month()) - 1 + months;
  return Date::from_ymd(total / 12, static_cast<unsigned>(total % 12) + 1, 1);
}

Date nth_weekday(int year, unsigned month, unsigned weekday, unsigned n) {
  if (n == 0) {
    Date last = Date::from_ymd(year, month, days_in_month(year, month));
    return last - static_cast<std::int32_t>((last.weekday() + 7 - weekday) % 7);
  }
  Date first = Date::from_ymd(year, month, 1);
  Date hit = first + static_cast<std::int32_t>((weekday + 7 - first.weekday()) % 7);
  return hit + static_cast<std::int32_t>(7 * (n - 1));
}

}  // namespace gcnet

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcnet/date.hpp"

namespace gcnet {

/// Minutes since 1970-01-01T00:00Z.
using UtcMinute = std::int64_t;

inline UtcMinute utc_minute(Date d, int minute_of_day) {
  return static_cast<UtcMinute>(d.days()) * 1440 + minute_of_day;
}

/// One `Rule` line of the zone source format.
struct TzRule {
  int from_year = 0;
  int to_year = 0;  // inclusive; INT32_MAX for "max"
  unsigned month = 1;
  // Day selector: fixed day-of-month, last weekday, or first weekday on/after a day.
  enum class On { kDay, kLast, kOnOrAfter } on = On::kDay;
  unsigned day = 1;
  unsigned weekday = 0;
  int at_minutes = 0;
  char at_ref = 'w';  // 'w' wall, 's' standard, 'u' UTC
  int save_minutes = 0;
};

/// One line (or continuation line) of a `Zone` block.
struct TzZoneLine {
  int std_offset_minutes = 0;
  std::string rules;  // "-" for none
  std::optional<UtcMinute> until;
};

class TimeZone {
 public:
  TimeZone(std::string name, std::vector<TzZoneLine> lines,
           const std::map<std::string, std::vector<TzRule>>* rules);

  const std::string& name() const { return name_; }

  /// Total UTC offset (standard + daylight saving) in effect at an instant.
  int offset_at(UtcMinute instant) const;

  /// Converts a local wall-clock time on a calendar date to UTC.
  UtcMinute to_utc(Date local_date, int local_minute_of_day) const;

 private:
  const TzZoneLine& line_at(UtcMinute instant) const;
  int save_at(const TzZoneLine& line, UtcMinute instant) const;

  std::string name_;
  std::vector<TzZoneLine> lines_;
  const std::map<std::string, std::vector<TzRule>>* rules_;
};

/// A parsed snapshot of zone rules in the IANA source format (a subset:
/// `Rule` and `Zone` lines with continuations).
class TzDatabase {
 public:
  static TzDatabase parse(std::string_view source);
  /// The snapshot compiled into the library.
  static const TzDatabase& pinned();

  const TimeZone& zone(std::string_view name) const;
  bool contains(std::string_view name) const;
  std::vector<std::string> zone_names() const;

  TzDatabase(const TzDatabase&) = delete;
  TzDatabase& operator=(const TzDatabase&) = delete;
  TzDatabase(TzDatabase&&) = default;

 private:
  TzDatabase() = default;
  // Rules live in a node-based container so zones can keep a stable pointer.
  std::unique_ptr<std::map<std::string, std::vector<TzRule>>> rules_;
  std::map<std::string, TimeZone, std::less<>> zones_;
};

/// Source text of the pinned snapshot.
std::string_view pinned_tzdata();

}  // namespace gcnet

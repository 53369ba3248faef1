#include "gcnet/tz.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <climits>
#include <sstream>

#include "gcnet/error.hpp"

namespace gcnet {

namespace {

constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                       "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
constexpr std::array<std::string_view, 7> kWeekdays = {"Sun", "Mon", "Tue", "Wed",
                                                        "Thu", "Fri", "Sat"};

unsigned parse_month(std::string_view s) {
  for (unsigned i = 0; i < kMonths.size(); ++i) {
    if (s.substr(0, 3) == kMonths[i]) return i + 1;
  }
  throw InputError("tzdata: bad month '" + std::string(s) + "'");
}

unsigned parse_weekday(std::string_view s) {
  for (unsigned i = 0; i < kWeekdays.size(); ++i) {
    if (s.substr(0, 3) == kWeekdays[i]) return i;
  }
  throw InputError("tzdata: bad weekday '" + std::string(s) + "'");
}

int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("tzdata: bad number '" + std::string(s) + "'");
  }
  return v;
}

// "[-]h[:mm]" -> minutes
int parse_hm(std::string_view s) {
  bool neg = !s.empty() && s.front() == '-';
  if (neg) s.remove_prefix(1);
  auto colon = s.find(':');
  int minutes = parse_int(s.substr(0, colon)) * 60;
  if (colon != std::string_view::npos) minutes += parse_int(s.substr(colon + 1, 2));
  return neg ? -minutes : minutes;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

Date rule_date(const TzRule& r, int year) {
  switch (r.on) {
    case TzRule::On::kDay:
      return Date::from_ymd(year, r.month, r.day);
    case TzRule::On::kLast:
      return nth_weekday(year, r.month, r.weekday, 0);
    case TzRule::On::kOnOrAfter: {
      Date start = Date::from_ymd(year, r.month, r.day);
      return start + static_cast<std::int32_t>((r.weekday + 7 - start.weekday()) % 7);
    }
  }
  return {};
}

TzRule parse_rule(const std::vector<std::string>& f) {
  if (f.size() < 9) throw InputError("tzdata: short Rule line");
  TzRule r;
  r.from_year = parse_int(f[2]);
  if (f[3] == "only") {
    r.to_year = r.from_year;
  } else if (f[3] == "max") {
    r.to_year = INT_MAX;
  } else {
    r.to_year = parse_int(f[3]);
  }
  r.month = parse_month(f[5]);
  const std::string& on = f[6];
  if (on.rfind("last", 0) == 0) {
    r.on = TzRule::On::kLast;
    r.weekday = parse_weekday(std::string_view(on).substr(4));
  } else if (auto ge = on.find(">="); ge != std::string::npos) {
    r.on = TzRule::On::kOnOrAfter;
    r.weekday = parse_weekday(std::string_view(on).substr(0, ge));
    r.day = static_cast<unsigned>(parse_int(std::string_view(on).substr(ge + 2)));
  } else {
    r.on = TzRule::On::kDay;
    r.day = static_cast<unsigned>(parse_int(on));
  }
  std::string at = f[7];
  if (!at.empty() && (at.back() == 'u' || at.back() == 's' || at.back() == 'w' ||
                      at.back() == 'g' || at.back() == 'z')) {
    char ref = at.back();
    r.at_ref = (ref == 'g' || ref == 'z') ? 'u' : ref;
    at.pop_back();
  }
  r.at_minutes = parse_hm(at);
  r.save_minutes = parse_hm(f[8]);
  return r;
}

// Zone fields after NAME: STDOFF RULES FORMAT [UNTIL: year [month [day [time]]]]
TzZoneLine parse_zone_fields(const std::vector<std::string>& f, std::size_t first) {
  if (f.size() < first + 3) throw InputError("tzdata: short Zone line");
  TzZoneLine z;
  z.std_offset_minutes = parse_hm(f[first]);
  z.rules = f[first + 1];
  if (f.size() > first + 3) {
    int year = parse_int(f[first + 3]);
    unsigned month = f.size() > first + 4 ? parse_month(f[first + 4]) : 1;
    unsigned day = f.size() > first + 5 ? static_cast<unsigned>(parse_int(f[first + 5])) : 1;
    int minutes = f.size() > first + 6 ? parse_hm(f[first + 6]) : 0;
    z.until = utc_minute(Date::from_ymd(year, month, day), minutes) - z.std_offset_minutes;
  }
  return z;
}

}  // namespace

TimeZone::TimeZone(std::string name, std::vector<TzZoneLine> lines,
                   const std::map<std::string, std::vector<TzRule>>* rules)
    : name_(std::move(name)), lines_(std::move(lines)), rules_(rules) {}

const TzZoneLine& TimeZone::line_at(UtcMinute instant) const {
  for (const auto& line : lines_) {
    if (!line.until || instant < *line.until) return line;
  }
  return lines_.back();
}

int TimeZone::save_at(const TzZoneLine& line, UtcMinute instant) const {
  if (line.rules == "-") return 0;
  auto it = rules_->find(line.rules);
  if (it == rules_->end()) {
    // A fixed amount of saving written inline, e.g. "1:00".
    return parse_hm(line.rules);
  }
  const auto& rules = it->second;
  int dst_save = 0;
  for (const auto& r : rules) dst_save = std::max(dst_save, r.save_minutes);

  const int year = Date(static_cast<std::int32_t>(instant / 1440)).year();
  std::optional<UtcMinute> best_at;
  int best_save = 0;
  for (int y = year - 2; y <= year; ++y) {
    for (const auto& r : rules) {
      if (y < r.from_year || y > r.to_year) continue;
      UtcMinute at = utc_minute(rule_date(r, y), r.at_minutes);
      if (r.at_ref != 'u') at -= line.std_offset_minutes;
      if (r.at_ref == 'w') at -= (r.save_minutes == 0 ? dst_save : 0);
      if (at <= instant && (!best_at || at > *best_at)) {
        best_at = at;
        best_save = r.save_minutes;
      }
    }
  }
  return best_save;
}

int TimeZone::offset_at(UtcMinute instant) const {
  const auto& line = line_at(instant);
  return line.std_offset_minutes + save_at(line, instant);
}

UtcMinute TimeZone::to_utc(Date local_date, int local_minute_of_day) const {
  const UtcMinute local = utc_minute(local_date, local_minute_of_day);
  UtcMinute guess = local - line_at(local).std_offset_minutes;
  int offset = offset_at(guess);
  UtcMinute utc = local - offset;
  // A second pass settles instants just across a transition.
  int refined = offset_at(utc);
  if (refined != offset) utc = local - refined;
  return utc;
}

TzDatabase TzDatabase::parse(std::string_view source) {
  TzDatabase db;
  db.rules_ = std::make_unique<std::map<std::string, std::vector<TzRule>>>();
  std::map<std::string, std::vector<TzZoneLine>> zone_lines;
  std::string current_zone;

  std::istringstream in{std::string(source)};
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto f = split_ws(line);
    if (f.empty()) continue;
    if (f[0] == "Rule") {
      (*db.rules_)[f[1]].push_back(parse_rule(f));
      current_zone.clear();
    } else if (f[0] == "Zone") {
      if (f.size() < 2) throw InputError("tzdata: Zone without name");
      current_zone = f[1];
      zone_lines[current_zone].push_back(parse_zone_fields(f, 2));
    } else if (!current_zone.empty() && (line.front() == ' ' || line.front() == '\t')) {
      zone_lines[current_zone].push_back(parse_zone_fields(f, 0));
    } else {
      throw InputError("tzdata: unrecognized line '" + line + "'");
    }
  }
  for (auto& [name, lines] : zone_lines) {
    for (const auto& l : lines) {
      if (l.rules != "-" && !db.rules_->contains(l.rules) &&
          l.rules.find(':') == std::string::npos) {
        throw InputError("tzdata: zone " + name + " references unknown rules " + l.rules);
      }
    }
    db.zones_.emplace(name, TimeZone(name, std::move(lines), db.rules_.get()));
  }
  return db;
}

const TzDatabase& TzDatabase::pinned() {
  static const TzDatabase db = parse(pinned_tzdata());
  return db;
}

const TimeZone& TzDatabase::zone(std::string_view name) const {
  auto it = zones_.find(name);
  if (it == zones_.end()) throw InputError("unknown timezone '" + std::string(name) + "'");
  return it->second;
}

bool TzDatabase::contains(std::string_view name) const { return zones_.find(name) != zones_.end(); }

std::vector<std::string> TzDatabase::zone_names() const {
  std::vector<std::string> out;
  for (const auto& [name, z] : zones_) out.push_back(name);
  return out;
}

}  // namespace gcnet

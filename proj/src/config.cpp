#include "gcnet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gcnet/error.hpp"

namespace gcnet {

using nlohmann::json;

namespace {

std::string to_string(WindowMode m) { return m == WindowMode::kCalendar ? "calendar" : "trading"; }

std::string to_string(InstantaneousRule r) {
  switch (r) {
    case InstantaneousRule::kAuto: return "auto";
    case InstantaneousRule::kNever: return "never";
    case InstantaneousRule::kAlways: return "always";
  }
  return "auto";
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("config: wrong type for '") + key + "'");
  }
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Date parse_month(const std::string& text) {
  if (text.size() != 7 || text[4] != '-') throw InputError("expected YYYY-MM, got '" + text + "'");
  return Date::parse(text + "-01");
}

void StudyConfig::validate() const {
  if (window_months < 1) throw InputError("config: window_months must be >= 1");
  if (drift_months < 1) throw InputError("config: drift_months must be >= 1");
  if (window_days < 2 || drift_days < 1) throw InputError("config: window_days >= 2 and drift_days >= 1 required");
  if (!(level > 0.0 && level < 1.0)) throw InputError("config: level must be in (0, 1)");
  if (!(diagnostic_level > 0.0 && diagnostic_level < 1.0)) throw InputError("config: diagnostic_level must be in (0, 1)");
  if (bandwidth < 2) throw InputError("config: bandwidth must be >= 2");
  if (order_min < 0 || order_max < order_min) throw InputError("config: invalid order range");
  if (order_min < 1) throw InputError("config: variance orders start at 1");
  if (families.empty()) throw InputError("config: no variance families");
  if (starts < 1) throw InputError("config: starts must be >= 1");
  if (diagnostic_lags < 1 || diagnostic_replications < 10) throw InputError("config: invalid diagnostic settings");
  if (probit_draws < 1 || probit_burn_in < 0) throw InputError("config: invalid probit draw counts");
  if (survival_max_step < 1) throw InputError("config: survival_max_step must be >= 1");
  if (min_returns <= bandwidth + 1) throw InputError("config: min_returns must exceed bandwidth + 1");
  if (!start.empty()) parse_month(start);
  if (!end.empty()) parse_month(end);
  if (!start.empty() && !end.empty() && parse_month(end) < parse_month(start)) {
    throw InputError("config: end precedes start");
  }
}

std::vector<ModelSpec> StudyConfig::grid() const { return make_grid(families, order_min, order_max); }

std::string StudyConfig::to_json() const {
  json j;
  j["prices"] = prices;
  j["metadata"] = metadata;
  j["fx"] = fx;
  j["markets"] = markets;
  j["us_market"] = us_market;
  j["start"] = start;
  j["end"] = end;
  j["window_mode"] = to_string(window_mode);
  j["window_months"] = window_months;
  j["drift_months"] = drift_months;
  j["window_days"] = window_days;
  j["drift_days"] = drift_days;
  j["min_returns"] = min_returns;
  std::vector<std::string> fam;
  for (auto f : families) fam.push_back(gcnet::to_string(f));
  j["families"] = fam;
  j["order_min"] = order_min;
  j["order_max"] = order_max;
  j["starts"] = starts;
  j["diagnostic_level"] = diagnostic_level;
  j["diagnostic_lags"] = diagnostic_lags;
  j["diagnostic_replications"] = diagnostic_replications;
  j["bandwidth"] = bandwidth;
  j["level"] = level;
  j["instantaneous"] = to_string(instantaneous);
  j["harmonic_incoming"] = harmonic_incoming;
  j["survival_max_step"] = survival_max_step;
  j["probit"] = probit;
  j["probit_draws"] = probit_draws;
  j["probit_burn_in"] = probit_burn_in;
  j["us_self_full_cycle"] = us_self_full_cycle;
  j["seed"] = seed;
  j["output"] = output;
  return j.dump(2);
}

std::uint64_t StudyConfig::hash() const { return fnv1a(to_json()); }

StudyConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config: top level must be an object");

  StudyConfig c;
  std::set<std::string> known;
  const json defaults = json::parse(c.to_json());
  for (const auto& [key, value] : defaults.items()) known.insert(key);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw InputError("config: unknown key '" + key + "'");
  }
  read(j, "prices", c.prices);
  read(j, "metadata", c.metadata);
  read(j, "fx", c.fx);
  read(j, "markets", c.markets);
  read(j, "us_market", c.us_market);
  read(j, "start", c.start);
  read(j, "end", c.end);
  if (j.contains("window_mode")) {
    std::string m;
    read(j, "window_mode", m);
    if (m == "calendar") {
      c.window_mode = WindowMode::kCalendar;
    } else if (m == "trading") {
      c.window_mode = WindowMode::kTrading;
    } else {
      throw InputError("config: window_mode must be calendar or trading");
    }
  }
  read(j, "window_months", c.window_months);
  read(j, "drift_months", c.drift_months);
  read(j, "window_days", c.window_days);
  read(j, "drift_days", c.drift_days);
  read(j, "min_returns", c.min_returns);
  if (j.contains("families")) {
    std::vector<std::string> names;
    read(j, "families", names);
    c.families.clear();
    for (const auto& n : names) c.families.push_back(parse_family(n));
  }
  read(j, "order_min", c.order_min);
  read(j, "order_max", c.order_max);
  read(j, "starts", c.starts);
  read(j, "diagnostic_level", c.diagnostic_level);
  read(j, "diagnostic_lags", c.diagnostic_lags);
  read(j, "diagnostic_replications", c.diagnostic_replications);
  read(j, "bandwidth", c.bandwidth);
  read(j, "level", c.level);
  if (j.contains("instantaneous")) {
    std::string r;
    read(j, "instantaneous", r);
    if (r == "auto") {
      c.instantaneous = InstantaneousRule::kAuto;
    } else if (r == "never") {
      c.instantaneous = InstantaneousRule::kNever;
    } else if (r == "always") {
      c.instantaneous = InstantaneousRule::kAlways;
    } else {
      throw InputError("config: instantaneous must be auto, never or always");
    }
  }
  read(j, "harmonic_incoming", c.harmonic_incoming);
  read(j, "survival_max_step", c.survival_max_step);
  read(j, "probit", c.probit);
  read(j, "probit_draws", c.probit_draws);
  read(j, "probit_burn_in", c.probit_burn_in);
  read(j, "us_self_full_cycle", c.us_self_full_cycle);
  read(j, "seed", c.seed);
  read(j, "output", c.output);
  c.validate();
  return c;
}

StudyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gcnet

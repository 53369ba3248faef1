#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcnet/date.hpp"
#include "gcnet/volmodel.hpp"

namespace gcnet {

enum class WindowMode { kCalendar, kTrading };
/// When the lag-0 term enters the statistic.
enum class InstantaneousRule { kAuto, kNever, kAlways };

struct StudyConfig {
  // inputs
  std::string prices;
  std::string metadata;
  std::string fx;  ///< optional
  std::vector<std::string> markets;  ///< empty = every price column
  std::string us_market = "US";
  std::string start;  ///< YYYY-MM; empty = first month of data
  std::string end;    ///< YYYY-MM inclusive; empty = last month of data

  // windowing
  WindowMode window_mode = WindowMode::kCalendar;
  int window_months = 3;
  int drift_months = 1;
  int window_days = 63;
  int drift_days = 21;
  int min_returns = 30;

  // volatility models
  std::vector<VarianceFamily> families{VarianceFamily::kGarch, VarianceFamily::kEgarch, VarianceFamily::kGjr};
  int order_min = 1;
  int order_max = 4;
  int starts = 5;
  double diagnostic_level = 0.05;
  int diagnostic_lags = 10;
  int diagnostic_replications = 500;

  // causality
  int bandwidth = 5;
  double level = 0.01;
  InstantaneousRule instantaneous = InstantaneousRule::kAuto;

  // networks
  bool harmonic_incoming = false;
  int survival_max_step = 12;

  // inference
  bool probit = true;
  int probit_draws = 1000;
  int probit_burn_in = 200;
  bool us_self_full_cycle = false;

  std::uint64_t seed = 20060102;
  std::string output = "out";

  /// Throws InputError when an invariant does not hold.
  void validate() const;
  /// Canonical JSON text (sorted keys) of every field.
  std::string to_json() const;
  /// FNV-1a of to_json().
  std::uint64_t hash() const;
  std::vector<ModelSpec> grid() const;
};

/// Parses a JSON config. Unknown keys and wrongly typed values are errors.
StudyConfig parse_config(const std::string& text);
StudyConfig load_config(const std::string& path);

/// FNV-1a 64-bit.
std::uint64_t fnv1a(const std::string& bytes);

/// First day of the month named `YYYY-MM`.
Date parse_month(const std::string& text);

}  // namespace gcnet

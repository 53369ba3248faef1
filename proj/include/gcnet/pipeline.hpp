#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gcnet/alignment.hpp"
#include "gcnet/causality.hpp"
#include "gcnet/config.hpp"
#include "gcnet/ingestion.hpp"
#include "gcnet/netmetrics.hpp"
#include "gcnet/volmodel.hpp"

namespace gcnet {

/// Half-open date range [from, to); index is 1-based.
struct Window {
  int index = 1;
  Date from;
  Date to;
};

/// Calendar-month windows over the months of first..last (inclusive),
/// `window_months` long, starting every `drift_months`.
std::vector<Window> make_windows(Date first, Date last, int window_months, int drift_months);

/// Windows of `window_days` trading dates stepping `drift_days` dates.
std::vector<Window> make_trading_windows(const std::vector<Date>& dates, int window_days, int drift_days);

struct StudyInputs {
  std::vector<std::string> markets;
  PricePanel prices;  ///< USD, same order as markets
  ClockSet clocks;
  std::size_t fx_dropped = 0;
};

/// Loads prices, metadata and (optionally) FX; converts to USD dropping
/// dates without a fixing. Every market needs closing-hour metadata.
StudyInputs load_inputs(const StudyConfig& config);

std::vector<Window> study_windows(const StudyConfig& config, const StudyInputs& inputs);

struct MarketFit {
  std::string market;
  std::optional<VolFit> fit;  ///< absent when loaded from cached residuals
  ReturnSeries residuals;     ///< standardized, on the market's own calendar
};

struct WindowFits {
  Window window;
  std::vector<MarketFit> markets;
  std::string error;
  bool ok() const { return error.empty(); }
};

WindowFits fit_window(const StudyInputs& inputs, const StudyConfig& config, const Window& window);

struct PairInfo {
  std::string source;
  std::string target;
  std::size_t length = 0;
  bool mixed_shift = false;
};

struct WindowTests {
  Window window;
  std::vector<CausalityDecision> decisions;
  std::vector<PairInfo> pairs;
  std::string error;
  bool ok() const { return error.empty(); }
};

/// All N(N-1) ordered-pair tests of one window at the Bonferroni level.
WindowTests test_window(const StudyInputs& inputs, const StudyConfig& config, const WindowFits& fits);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

/// Stage entry points. Each reads the previous stage's files from the
/// output directory, so any stage can be rerun on cached upstream results.
/// Per-window failures are written to `windows/<t>/error.txt` and logged.
void run_fit_stage(const StudyConfig& config, const StudyInputs& inputs, std::ostream& log);
void run_test_stage(const StudyConfig& config, const StudyInputs& inputs, std::ostream& log);
void run_network_stage(const StudyConfig& config, const StudyInputs& inputs, std::ostream& log);
void run_probit_stage(const StudyConfig& config, const StudyInputs& inputs, std::ostream& log);
/// Trends, probit summary table and manifest. Returns the number of failed windows.
int run_report_stage(const StudyConfig& config, const StudyInputs& inputs, std::ostream& log);

struct StudyReport {
  int windows = 0;
  int failed_windows = 0;
  std::vector<StageTiming> timing;
};

/// Every stage in order; timings go to `timing.json`, outside the
/// deterministic bundle.
StudyReport run_study(const StudyConfig& config, std::ostream& log);

/// `windows/<t>` below the output directory.
std::string window_dir(const StudyConfig& config, const Window& window);

}  // namespace gcnet

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gcnet {

struct TrendResult {
  double intercept = 0.0;
  double slope = 0.0;
  double se = 0.0;         ///< HAC standard error of the slope
  double t_stat = 0.0;
  double p_value = 1.0;    ///< two-sided normal
  double bandwidth = 0.0;  ///< quadratic-spectral bandwidth used
  double residual_variance = 0.0;
  std::size_t n = 0;
  std::string stars() const;  ///< "*", "**", "***" at 10/5/1%
};

struct HacOptions {
  /// Fixed bandwidth; automatic selection when empty. 0 gives the
  /// heteroskedasticity-consistent (White) variance.
  std::optional<double> bandwidth;
  /// Multiplies the variance by n/(n-2).
  bool small_sample = true;
};

/// Quadratic-spectral kernel.
double qs_kernel(double x);

/// Automatic bandwidth for the quadratic-spectral kernel from the scores
/// of the slope (intercept excluded from the weighting vector).
double qs_bandwidth(const std::vector<double>& slope_scores);

/// OLS of the series on a + b t, t = 1..n, with a kernel long-run variance.
/// Throws DomainError for n < 2; for n < 8 when `require_length`.
TrendResult hac_trend(std::span<const double> series, const HacOptions& options = {}, bool require_length = true);

/// `series,n,slope,se,t,p,stars`
void write_trend_header(std::ostream& out);
void write_trend(std::ostream& out, const std::string& name, const TrendResult& r);

}  // namespace gcnet

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gcnet/optimizer.hpp"
#include "gcnet/rng.hpp"

namespace gcnet {

enum class VarianceFamily { kGarch, kEgarch, kGjr };

std::string to_string(VarianceFamily f);
VarianceFamily parse_family(const std::string& name);

/// ARMA(p, q) mean with a (r, s) conditional variance recursion.
struct ModelSpec {
  int p = 1;
  int q = 1;
  int r = 1;
  int s = 1;
  VarianceFamily family = VarianceFamily::kGarch;

  int total_order() const { return p + q + r + s; }
  /// Estimated parameters: mean + ARMA + variance + asymmetry + (shape, skew).
  int parameter_count() const;
  std::string label() const;
  bool operator==(const ModelSpec&) const = default;
};

/// Full grid of orders in [lo, hi] for every listed family, ordered by
/// total order, then family, then (p, q, r, s).
std::vector<ModelSpec> make_grid(const std::vector<VarianceFamily>& families, int lo = 1, int hi = 4);

struct VolParams {
  double mu = 0.0;
  std::vector<double> phi;    ///< AR, size p
  std::vector<double> theta;  ///< MA, size q
  double omega = 0.0;         ///< log-variance intercept for egarch
  std::vector<double> alpha;  ///< ARCH (egarch: sign effect), size r
  std::vector<double> gamma;  ///< asymmetry, size r; empty for garch
  std::vector<double> beta;   ///< GARCH, size s
  double nu = 2.0;            ///< SGED shape
  double xi = 1.0;            ///< SGED skew
};

/// Conditional variance path and innovations for given parameters.
struct Filtered {
  double log_likelihood = 0.0;
  std::vector<double> residuals;  ///< mean residuals epsilon_t
  std::vector<double> sigma2;
};

/// Log-likelihood of the ARMA-variance model under SGED innovations.
/// Pre-sample residuals are zero; pre-sample variance is the sample
/// variance of the mean residuals. Returns -inf when a variance is not positive.
Filtered filter(std::span<const double> returns, const ModelSpec& spec, const VolParams& params);

struct VolFit {
  ModelSpec spec;
  VolParams params;
  double log_likelihood = 0.0;
  double bic = 0.0;
  std::vector<double> std_residuals;
  std::vector<double> sigma2;
  double pr_resid_p = 0.0;  ///< diagnostic p-value on s_t
  double pr_sq_p = 0.0;     ///< diagnostic p-value on s_t^2
  bool diagnostics_failed = false;
  /// Best log-likelihood among the multi-start initial points.
  double best_start_log_likelihood = 0.0;
};

struct DiagnosticOptions {
  double level = 0.05;
  int lags = 10;
  int replications = 500;
  std::uint64_t seed = 20060102;
  bool enabled = true;  ///< off: p-values stay NaN and the fit is never flagged
};

struct FitOptions {
  int starts = 5;
  std::uint64_t seed = 1;
  optim::NelderMeadOptions simplex{0.5, 1e-9, 0};  ///< 0 evaluations = scale with dimension
  optim::BfgsOptions quasi_newton{};
  DiagnosticOptions diagnostics{};
};

/// Maximum-likelihood fit from deterministic multi-starts (simplex, then
/// quasi-Newton). Throws DegenerateVariance on constant input and
/// NonConvergence when no start yields a finite likelihood.
VolFit fit(std::span<const double> returns, const ModelSpec& spec, const FitOptions& options = {});

struct SelectionOptions {
  FitOptions fit{};
  /// Fit levels of increasing total order only until one has survivors.
  /// Gives the same choice as evaluating the whole grid.
  bool lazy = true;
};

/// Survivors of both diagnostics with the least total order, ties by BIC.
/// Falls back to the best-BIC fit, flagged, when nothing survives.
VolFit select_model(std::span<const double> returns, const std::vector<ModelSpec>& grid,
                    const SelectionOptions& options = {});

/// GARCH(1,1) path with constant mean and SGED innovations, after `burn_in` discarded steps.
std::vector<double> simulate_garch(std::size_t length, double mu, double omega, double alpha, double beta,
                                   double nu, double xi, Rng& rng, std::size_t burn_in = 500);

}  // namespace gcnet

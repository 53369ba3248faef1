#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gcnet/design.hpp"
#include "gcnet/rng.hpp"

namespace gcnet {

enum class SpatialModel { kSar, kSem };
std::string to_string(SpatialModel m);

struct ProbitOptions {
  int draws = 1000;  ///< retained
  int burn_in = 200;
  std::uint64_t seed = 1;
  /// Holds rho (or lambda) at this value and skips its update.
  std::optional<double> fixed_spatial;
  double initial_step = 0.1;
  double acceptance_low = 0.25;
  double acceptance_high = 0.45;
  int tune_every = 50;
};

struct ParamSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  bool sig10 = false;
  bool sig05 = false;
  bool sig01 = false;
};

struct ProbitPosterior {
  SpatialModel model = SpatialModel::kSar;
  std::vector<std::string> names;           ///< beta names, then rho or lambda
  std::vector<Eigen::VectorXd> beta_draws;  ///< retained draws
  std::vector<double> spatial_draws;
  int burn_in = 0;
  double acceptance = 0.0;  ///< post-burn-in Metropolis acceptance rate
  double step = 0.0;        ///< frozen proposal scale
  double lower = -1.0;      ///< support of the spatial parameter
  double upper = 1.0;
  std::vector<ParamSummary> summary;
};

/// Eigen-based log|I - rho W| evaluator and stable interval for rho.
class SpatialDeterminant {
 public:
  explicit SpatialDeterminant(const Eigen::MatrixXd& w);
  double log_det(double rho) const;
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool symmetric() const { return symmetric_; }
  /// (I - rho W)^{-1} v.
  Eigen::VectorXd solve(double rho, const Eigen::VectorXd& v) const;

 private:
  Eigen::MatrixXd w_;
  bool symmetric_ = false;
  Eigen::VectorXcd values_;
  Eigen::MatrixXd vectors_;  // orthonormal eigenvectors when symmetric
  double lower_ = -1.0;
  double upper_ = 1.0;
};

/// Standard normal truncated to (a, inf).
double truncated_normal_above(double a, Rng& rng);

/// Gibbs sampler with single-site latent sweeps, Gaussian beta draws under a
/// flat prior and a random-walk Metropolis step for the spatial parameter
/// (uniform prior on its stable interval). Throws DomainError when X is rank
/// deficient or y is constant.
ProbitPosterior spatial_probit(const SpatialDesign& design, SpatialModel model, const ProbitOptions& options = {});
ProbitPosterior sar_probit_mcmc(const SpatialDesign& design, const ProbitOptions& options = {});
ProbitPosterior sem_probit_mcmc(const SpatialDesign& design, const ProbitOptions& options = {});

/// Posterior mean/sd and significance (|mean|/sd above the two-sided normal quantile).
ParamSummary summarize(const std::string& name, const std::vector<double>& draws);

/// `window,model,param,post_mean,post_sd,sig10,sig05,sig01`
void write_coefficients(std::ostream& out, int window, const ProbitPosterior& post, bool header = true);

struct SignificanceCount {
  std::string param;
  /// Exclusive bands: [0] 5% < p <= 10%, [1] 1% < p <= 5%, [2] p <= 1%.
  std::vector<int> sar{0, 0, 0};
  std::vector<int> sem{0, 0, 0};
};

/// Aggregates per-window summaries into counts per parameter and band.
std::vector<SignificanceCount> count_significant(const std::vector<ProbitPosterior>& sar,
                                                 const std::vector<ProbitPosterior>& sem);
/// Table layout: parameter rows; count and percent per model and band.
void write_significance_table(std::ostream& out, const std::vector<SignificanceCount>& counts, int windows);

}  // namespace gcnet

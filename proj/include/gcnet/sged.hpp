#pragma once

#include <cmath>
#include <random>

namespace gcnet {

/// Skewed generalized error distribution standardized to mean 0 and
/// variance 1. A unit-variance GED with shape `nu` is skewed by the
/// inverse-scale-factor construction with skew `xi`, then shifted and
/// rescaled. nu = 2, xi = 1 is the standard normal.
class Sged {
 public:
  Sged(double nu, double xi);

  double nu() const { return nu_; }
  double xi() const { return xi_; }

  double log_density(double x) const;
  double density(double x) const;

  template <class Rng>
  double sample(Rng& rng) const {
    std::gamma_distribution<double> gamma(1.0 / nu_, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double magnitude = lambda_ * std::pow(2.0 * gamma(rng), 1.0 / nu_);
    const double raw = unif(rng) < xi_ * xi_ / (1.0 + xi_ * xi_) ? magnitude * xi_ : -magnitude / xi_;
    return (raw - mean_) / sd_;
  }

 private:
  double nu_;
  double xi_;
  double lambda_;    // GED scale giving unit variance
  double log_norm_;  // log of the GED normalizing constant
  double mean_;      // mean of the skewed, unstandardized variable
  double sd_;        // its standard deviation
  double log_skew_norm_;
};

/// Log density of the standardized skewed GED. Throws DomainError on
/// non-finite x or non-positive parameters.
double sged_logdensity(double x, double nu, double xi);

}  // namespace gcnet

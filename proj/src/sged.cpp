#include "gcnet/sged.hpp"

#include <cmath>

#include "gcnet/error.hpp"

namespace gcnet {

Sged::Sged(double nu, double xi) : nu_(nu), xi_(xi) {
  if (!(nu > 0.0) || !(xi > 0.0) || !std::isfinite(nu) || !std::isfinite(xi)) {
    throw DomainError("sged: shape and skew must be positive and finite");
  }
  const double lg1 = std::lgamma(1.0 / nu);
  const double lg2 = std::lgamma(2.0 / nu);
  const double lg3 = std::lgamma(3.0 / nu);
  lambda_ = std::sqrt(std::exp(-2.0 / nu * std::log(2.0) + lg1 - lg3));
  log_norm_ = std::log(nu) - std::log(lambda_) - (1.0 + 1.0 / nu) * std::log(2.0) - lg1;
  // E|z| of the unit-variance GED.
  const double m1 = lambda_ * std::exp(std::log(2.0) / nu + lg2 - lg1);
  mean_ = m1 * (xi - 1.0 / xi);
  const double second = xi * xi + 1.0 / (xi * xi) - 1.0;
  sd_ = std::sqrt(second - mean_ * mean_);
  log_skew_norm_ = std::log(2.0 / (xi + 1.0 / xi));
}

double Sged::log_density(double x) const {
  const double y = mean_ + sd_ * x;
  const double u = y >= 0.0 ? y / xi_ : y * xi_;
  return std::log(sd_) + log_skew_norm_ + log_norm_ - 0.5 * std::pow(std::abs(u) / lambda_, nu_);
}

double Sged::density(double x) const { return std::exp(log_density(x)); }

double sged_logdensity(double x, double nu, double xi) {
  if (!std::isfinite(x)) throw DomainError("sged: non-finite argument");
  return Sged(nu, xi).log_density(x);
}

}  // namespace gcnet

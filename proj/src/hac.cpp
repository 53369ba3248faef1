#include "gcnet/hac.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Dense>

#include "csv.hpp"
#include "gcnet/causality.hpp"
#include "gcnet/error.hpp"

namespace gcnet {

std::string TrendResult::stars() const {
  if (p_value < 0.01) return "***";
  if (p_value < 0.05) return "**";
  if (p_value < 0.10) return "*";
  return "";
}

double qs_kernel(double x) {
  if (x == 0.0) return 1.0;
  const double z = 6.0 * std::numbers::pi * x / 5.0;
  return 25.0 / (12.0 * std::numbers::pi * std::numbers::pi * x * x) * (std::sin(z) / z - std::cos(z));
}

double qs_bandwidth(const std::vector<double>& u) {
  const std::size_t n = u.size();
  const auto lags = static_cast<std::size_t>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 25.0)));
  auto sigma = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t t = j; t < n; ++t) s += u[t] * u[t - j];
    return s / static_cast<double>(n);
  };
  double s0 = sigma(0), s2 = 0.0;
  for (std::size_t j = 1; j <= lags && j < n; ++j) {
    const double sj = sigma(j);
    s0 += 2.0 * sj;
    s2 += 2.0 * static_cast<double>(j * j) * sj;
  }
  if (s0 == 0.0) return 0.0;
  const double ratio = s2 / s0;
  return 1.3221 * std::pow(ratio * ratio, 0.2) * std::pow(static_cast<double>(n), 0.2);
}

TrendResult hac_trend(std::span<const double> series, const HacOptions& options, bool require_length) {
  const std::size_t n = series.size();
  if (n < 2) throw DomainError("hac_trend: need at least two observations");
  if (require_length && n < 8) throw DomainError("hac_trend: need at least eight observations");
  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd X(rows, 2);
  Eigen::VectorXd y(rows);
  for (Eigen::Index t = 0; t < rows; ++t) {
    X(t, 0) = 1.0;
    X(t, 1) = static_cast<double>(t + 1);
    y(t) = series[static_cast<std::size_t>(t)];
  }
  const Eigen::Matrix2d xtx_inv = (X.transpose() * X).inverse();
  const Eigen::Vector2d b = xtx_inv * X.transpose() * y;
  const Eigen::VectorXd e = y - X * b;

  TrendResult r;
  r.n = n;
  r.intercept = b(0);
  r.slope = b(1);
  r.residual_variance = n > 2 ? e.squaredNorm() / static_cast<double>(n - 2) : 0.0;

  std::vector<double> scores(n);
  for (std::size_t t = 0; t < n; ++t) scores[t] = X(static_cast<Eigen::Index>(t), 1) * e(static_cast<Eigen::Index>(t));
  r.bandwidth = options.bandwidth.value_or(qs_bandwidth(scores));

  Eigen::Matrix2d S = Eigen::Matrix2d::Zero();
  auto gamma = [&](std::size_t j) {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    for (std::size_t t = j; t < n; ++t) {
      const auto a = static_cast<Eigen::Index>(t), c = static_cast<Eigen::Index>(t - j);
      g += (X.row(a).transpose() * e(a)) * (X.row(c) * e(c));
    }
    return g;
  };
  S = gamma(0);
  if (r.bandwidth > 0.0) {
    for (std::size_t j = 1; j < n; ++j) {
      const double w = qs_kernel(static_cast<double>(j) / r.bandwidth);
      const Eigen::Matrix2d g = gamma(j);
      S += w * (g + g.transpose());
    }
  }
  Eigen::Matrix2d V = xtx_inv * S * xtx_inv;
  if (options.small_sample && n > 2) V *= static_cast<double>(n) / static_cast<double>(n - 2);
  r.se = std::sqrt(std::max(V(1, 1), 0.0));
  if (r.se > 0.0) {
    r.t_stat = r.slope / r.se;
    r.p_value = 2.0 * normal_upper_tail(std::abs(r.t_stat));
  } else {
    r.t_stat = r.slope == 0.0 ? 0.0 : std::copysign(INFINITY, r.slope);
    r.p_value = r.slope == 0.0 ? 1.0 : 0.0;
  }
  return r;
}

void write_trend_header(std::ostream& out) { out << "series,n,slope,se,t,p,stars\n"; }

void write_trend(std::ostream& out, const std::string& name, const TrendResult& r) {
  out << name << ',' << r.n << ',' << csv::fmt(r.slope) << ',' << csv::fmt(r.se) << ',' << csv::fmt(r.t_stat) << ','
      << csv::fmt(r.p_value) << ',' << r.stars() << '\n';
}

}  // namespace gcnet

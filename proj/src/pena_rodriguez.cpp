#include "gcnet/pena_rodriguez.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <Eigen/Dense>

#include "gcnet/error.hpp"
#include "gcnet/rng.hpp"

namespace gcnet {

double pena_rodriguez_statistic(std::span<const double> x, int m) {
  const std::size_t n = x.size();
  if (m < 1 || n <= static_cast<std::size_t>(m)) {
    throw DomainError("pena_rodriguez: need 1 <= m < series length");
  }
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  if (!(c0 > 0.0)) throw DomainError("pena_rodriguez: zero-variance series");

  std::vector<double> r(static_cast<std::size_t>(m) + 1, 1.0);
  for (int k = 1; k <= m; ++k) {
    double c = 0.0;
    for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) c += (x[t] - mean) * (x[t - k] - mean);
    r[static_cast<std::size_t>(k)] = c / c0;
  }
  Eigen::MatrixXd toeplitz(m + 1, m + 1);
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) toeplitz(i, j) = r[static_cast<std::size_t>(std::abs(i - j))];
  }
  Eigen::LLT<Eigen::MatrixXd> llt(toeplitz);
  if (llt.info() != Eigen::Success) throw DomainError("pena_rodriguez: singular autocorrelation matrix");
  double log_det = 0.0;
  for (int i = 0; i <= m; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
  if (!std::isfinite(log_det)) throw DomainError("pena_rodriguez: singular autocorrelation matrix");
  return -static_cast<double>(n) / (m + 1) * log_det;
}

namespace {

double null_replicate(std::size_t length, int m, std::uint64_t seed, int b) {
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(b)}));
  std::normal_distribution<double> normal;
  std::vector<double> x(length);
  for (auto& v : x) v = normal(rng);
  return pena_rodriguez_statistic(x, m);
}

}  // namespace

std::vector<double> pena_rodriguez_null(std::size_t length, int m, int replications, std::uint64_t seed) {
  std::vector<double> stats(static_cast<std::size_t>(replications));
#pragma omp parallel for schedule(static)
  for (int b = 0; b < replications; ++b) {
    stats[static_cast<std::size_t>(b)] = null_replicate(length, m, seed, b);
  }
  std::sort(stats.begin(), stats.end());
  return stats;
}

std::vector<double> pena_rodriguez_null_serial(std::size_t length, int m, int replications, std::uint64_t seed) {
  std::vector<double> stats(static_cast<std::size_t>(replications));
  for (int b = 0; b < replications; ++b) stats[static_cast<std::size_t>(b)] = null_replicate(length, m, seed, b);
  std::sort(stats.begin(), stats.end());
  return stats;
}

double pena_rodriguez_pvalue(std::span<const double> x, int m, int replications, std::uint64_t seed) {
  if (replications < 1) throw DomainError("pena_rodriguez: replications must be positive");
  using Key = std::tuple<std::size_t, int, int, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const std::vector<double>>> cache;

  const double observed = pena_rodriguez_statistic(x, m);
  const Key key{x.size(), m, replications, seed};
  std::shared_ptr<const std::vector<double>> null;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) null = it->second;
  }
  if (!null) {
    auto fresh = std::make_shared<const std::vector<double>>(
        pena_rodriguez_null_serial(x.size(), m, replications, seed));
    std::lock_guard lock(mutex);
    null = cache.emplace(key, std::move(fresh)).first->second;
  }
  const auto first_ge = std::lower_bound(null->begin(), null->end(), observed);
  return static_cast<double>(null->end() - first_ge) / static_cast<double>(null->size());
}

}  // namespace gcnet

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gcnet {

/// Log-determinant portmanteau statistic: -T/(m+1) * ln det R_m, where R_m is
/// the (m+1)x(m+1) Toeplitz matrix of sample autocorrelations at lags 0..m.
/// Throws DomainError for zero variance or a singular R_m.
double pena_rodriguez_statistic(std::span<const double> x, int m);

/// Sorted statistics of `replications` iid Gaussian series of length `length`.
/// Replicate b draws from its own stream derived from (seed, b), so the
/// result does not depend on the thread count.
std::vector<double> pena_rodriguez_null(std::size_t length, int m, int replications, std::uint64_t seed);

/// Single-threaded reference for pena_rodriguez_null.
std::vector<double> pena_rodriguez_null_serial(std::size_t length, int m, int replications, std::uint64_t seed);

/// Fraction of simulated null statistics at or above the observed one.
/// Null distributions are cached per (length, m, replications, seed).
double pena_rodriguez_pvalue(std::span<const double> x, int m, int replications, std::uint64_t seed);

}  // namespace gcnet

#pragma once

#include <span>
#include <string>
#include <vector>

#include "gcnet/alignment.hpp"

namespace gcnet {

/// Bartlett kernel: 1 - |z| inside the unit interval, 0 outside.
double bartlett_weight(double z);

/// Cross-lagged correlations rho(k), k = 0..max_lag, between an effect
/// series and lagged values of a cause series:
///   rho(k) = sum_{t>=k} effect_t * cause_{t-k} / T / sqrt(C_ee(0) C_cc(0)).
/// Divisor T throughout; inputs are standardized residuals, so no demeaning.
struct CcfResult {
  std::string cause_id;
  std::string effect_id;
  std::vector<double> rho;
  std::size_t length = 0;
};

CcfResult cross_correlations(std::span<const double> effect, std::span<const double> cause, int max_lag);

enum class QVariant { kLagged, kInstantaneous };
std::string to_string(QVariant v);

/// Hong's kernel-weighted statistic with bandwidth M. The instantaneous
/// variant adds the lag-0 term to the weighted sum only; centring and
/// scaling are those of the lagged statistic. Requires ccf lags 0..M-1.
double hong_q(const CcfResult& ccf, int bandwidth, bool include_k0);

/// Reference form summing over every lag 1..T-1 (and 0 when requested),
/// with correlations computed directly from the series.
double hong_q_full(std::span<const double> effect, std::span<const double> cause, int bandwidth, bool include_k0);

/// Upper-tail standard normal probability, accurate far into the tail.
double normal_upper_tail(double z);

/// z with P(Z > z) = p.
double normal_upper_quantile(double p);

struct CausalityDecision {
  std::string source;
  std::string target;
  QVariant variant = QVariant::kLagged;
  double q = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double level = 0.0;
  std::size_t length = 0;
};

/// One-sided decision: p = 1 - Phi(Q), reject iff p < level.
CausalityDecision decide(double q, double level);

/// Per-test level for a family of N(N-1) ordered pairs.
double bonferroni_level(double family_level, std::size_t markets);

/// Effect/cause vectors prepared from an aligned pair so that lag 1 of the
/// statistic is the most recent source return available at each target
/// close and lag 0 the one that follows it (simultaneous for equal closes).
struct QInput {
  std::vector<double> effect;
  std::vector<double> cause;
  bool include_k0 = false;
};

QInput lag_frame(const AlignedPair& pair, bool include_k0);

/// Statistics for a batch of pairs; OpenMP over pairs.
std::vector<double> hong_q_batch(std::span<const QInput> inputs, int bandwidth);
/// Serial reference for hong_q_batch.
std::vector<double> hong_q_batch_serial(std::span<const QInput> inputs, int bandwidth);

/// Causality CSV: `source,target,variant,Q,p,reject`.
void write_decisions(std::ostream& out, const std::vector<CausalityDecision>& decisions);
std::vector<CausalityDecision> read_decisions(std::istream& in);

}  // namespace gcnet

#include "gcnet/causality.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "csv.hpp"
#include "gcnet/error.hpp"

namespace gcnet {

double bartlett_weight(double z) {
  const double a = std::abs(z);
  return a < 1.0 ? 1.0 - a : 0.0;
}

CcfResult cross_correlations(std::span<const double> effect, std::span<const double> cause, int max_lag) {
  const std::size_t n = effect.size();
  if (cause.size() != n) throw DomainError("cross_correlations: series lengths differ");
  if (max_lag < 0 || n <= static_cast<std::size_t>(max_lag)) {
    throw DomainError("cross_correlations: need length > max_lag");
  }
  double cee = 0.0, ccc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    cee += effect[t] * effect[t];
    ccc += cause[t] * cause[t];
  }
  if (!(cee > 0.0) || !(ccc > 0.0)) throw DomainError("cross_correlations: zero variance input");
  const double denom = std::sqrt(cee * ccc);

  CcfResult out;
  out.length = n;
  out.rho.resize(static_cast<std::size_t>(max_lag) + 1);
  for (int k = 0; k <= max_lag; ++k) {
    double c = 0.0;
    for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) c += effect[t] * cause[t - k];
    // The 1/T factors of C_ij and sqrt(C_ii C_jj) cancel.
    out.rho[static_cast<std::size_t>(k)] = c / denom;
  }
  return out;
}

std::string to_string(QVariant v) { return v == QVariant::kLagged ? "lagged" : "instantaneous"; }

namespace {

struct Centering {
  double mean;
  double sd;
};

Centering centering(double T, int bandwidth, std::size_t max_k) {
  double mean = 0.0, var = 0.0;
  for (std::size_t k = 1; k <= max_k; ++k) {
    const double kk = static_cast<double>(k);
    const double w = bartlett_weight(kk / bandwidth);
    if (w == 0.0) continue;
    mean += (1.0 - kk / T) * w * w;
    var += (1.0 - kk / T) * (1.0 - (kk + 1.0) / T) * w * w * w * w;
  }
  return {mean, std::sqrt(2.0 * var)};
}

}  // namespace

double hong_q(const CcfResult& ccf, int bandwidth, bool include_k0) {
  if (bandwidth < 2) throw DomainError("hong_q: bandwidth must be at least 2");
  const double T = static_cast<double>(ccf.length);
  if (ccf.length <= static_cast<std::size_t>(bandwidth)) throw DomainError("hong_q: need T > M");
  if (ccf.rho.size() < static_cast<std::size_t>(bandwidth)) throw DomainError("hong_q: ccf must cover lags 0..M-1");

  double sum = include_k0 ? ccf.rho[0] * ccf.rho[0] : 0.0;
  for (int k = 1; k < bandwidth; ++k) {
    const double w = bartlett_weight(static_cast<double>(k) / bandwidth);
    sum += w * w * ccf.rho[static_cast<std::size_t>(k)] * ccf.rho[static_cast<std::size_t>(k)];
  }
  const auto c = centering(T, bandwidth, static_cast<std::size_t>(bandwidth - 1));
  return (T * sum - c.mean) / c.sd;
}

double hong_q_full(std::span<const double> effect, std::span<const double> cause, int bandwidth, bool include_k0) {
  const std::size_t n = effect.size();
  const double T = static_cast<double>(n);
  double cee = 0.0, ccc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    cee += effect[t] * effect[t];
    ccc += cause[t] * cause[t];
  }
  const double denom = std::sqrt(cee * ccc);
  double sum = 0.0, mean = 0.0, var = 0.0;
  for (std::size_t k = include_k0 ? 0 : 1; k < n; ++k) {
    double c = 0.0;
    for (std::size_t t = k; t < n; ++t) c += effect[t] * cause[t - k];
    const double rho = c / denom;
    const double w = bartlett_weight(static_cast<double>(k) / bandwidth);
    sum += w * w * rho * rho;
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double w = bartlett_weight(kk / bandwidth);
    mean += (1.0 - kk / T) * w * w;
    var += (1.0 - kk / T) * (1.0 - (kk + 1.0) / T) * w * w * w * w;
  }
  return (T * sum - mean) / std::sqrt(2.0 * var);
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_upper_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_upper_quantile: p must be in (0, 1)");
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_upper_tail(mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CausalityDecision decide(double q, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("decide: level must be in (0, 1)");
  CausalityDecision d;
  d.q = q;
  d.p_value = normal_upper_tail(q);
  d.level = level;
  d.reject = d.p_value < level;
  return d;
}

double bonferroni_level(double family_level, std::size_t markets) {
  if (markets < 2) throw DomainError("bonferroni_level: need at least two markets");
  return family_level / static_cast<double>(markets * (markets - 1));
}

QInput lag_frame(const AlignedPair& pair, bool include_k0) {
  QInput in;
  in.include_k0 = include_k0;
  const std::size_t n = pair.entries.size();
  if (n < 2) return in;
  in.effect.reserve(n - 1);
  in.cause.reserve(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    in.effect.push_back(pair.entries[t].target);
    in.cause.push_back(pair.entries[t + 1].source);
  }
  return in;
}

namespace {

double q_of(const QInput& in, int bandwidth) {
  auto ccf = cross_correlations(in.effect, in.cause, bandwidth - 1);
  return hong_q(ccf, bandwidth, in.include_k0);
}

}  // namespace

std::vector<double> hong_q_batch(std::span<const QInput> inputs, int bandwidth) {
  std::vector<double> out(inputs.size());
  const auto n = static_cast<std::ptrdiff_t>(inputs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] = q_of(inputs[static_cast<std::size_t>(k)], bandwidth);
  }
  return out;
}

std::vector<double> hong_q_batch_serial(std::span<const QInput> inputs, int bandwidth) {
  std::vector<double> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) out.push_back(q_of(in, bandwidth));
  return out;
}

void write_decisions(std::ostream& out, const std::vector<CausalityDecision>& decisions) {
  out << "source,target,variant,Q,p,reject\n";
  for (const auto& d : decisions) {
    out << d.source << ',' << d.target << ',' << to_string(d.variant) << ',' << csv::fmt(d.q) << ','
        << csv::fmt(d.p_value) << ',' << (d.reject ? 1 : 0) << '\n';
  }
}

std::vector<CausalityDecision> read_decisions(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || csv::trim(line) != "source,target,variant,Q,p,reject") {
    throw InputError("causality file: bad header");
  }
  std::vector<CausalityDecision> out;
  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    auto f = csv::split(line);
    if (f.size() != 6) throw InputError("causality file: expected 6 fields");
    CausalityDecision d;
    d.source = std::string(f[0]);
    d.target = std::string(f[1]);
    if (f[2] == "lagged") {
      d.variant = QVariant::kLagged;
    } else if (f[2] == "instantaneous") {
      d.variant = QVariant::kInstantaneous;
    } else {
      throw InputError("causality file: unknown variant");
    }
    auto q = csv::parse_double(f[3]);
    auto p = csv::parse_double(f[4]);
    if (!q || !p) throw InputError("causality file: bad number");
    d.q = *q;
    d.p_value = *p;
    d.reject = f[5] == "1";
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace gcnet

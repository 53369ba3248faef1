#include "gcnet/volmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "gcnet/error.hpp"
#include "gcnet/pena_rodriguez.hpp"
#include "gcnet/sged.hpp"

namespace gcnet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kAbsNormalMean = std::sqrt(2.0 / std::numbers::pi);

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Partial autocorrelations in (-1, 1) to the coefficients of a stationary AR polynomial.
std::vector<double> pacf_to_ar(const std::vector<double>& kappa) {
  std::vector<double> phi;
  for (std::size_t k = 0; k < kappa.size(); ++k) {
    std::vector<double> next(k + 1);
    next[k] = kappa[k];
    for (std::size_t j = 0; j < k; ++j) next[j] = phi[j] - kappa[k] * phi[k - 1 - j];
    phi = std::move(next);
  }
  return phi;
}

// Positive weights with sum < 1.
std::vector<double> bounded_simplex(const double* u, int n) {
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, u[i]);
  double denom = std::exp(-m);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] = std::exp(u[i] - m);
    denom += w[static_cast<std::size_t>(i)];
  }
  for (auto& v : w) v /= denom;
  return w;
}

std::vector<double> simplex_logits(const std::vector<double>& w) {
  double rest = 1.0;
  for (double v : w) rest -= v;
  std::vector<double> u;
  for (double v : w) u.push_back(std::log(v) - std::log(rest));
  return u;
}

// Unconstrained vector <-> model parameters.
class ParamMap {
 public:
  explicit ParamMap(const ModelSpec& spec) : spec_(spec) {}

  int dimension() const {
    const int asym = spec_.family == VarianceFamily::kGarch ? 0 : spec_.r;
    return 1 + spec_.p + spec_.q + 1 + spec_.r + asym + spec_.s + 2;
  }

  VolParams decode(const Eigen::VectorXd& u) const {
    VolParams out;
    int i = 0;
    out.mu = u[i++];
    std::vector<double> kappa;
    for (int k = 0; k < spec_.p; ++k) kappa.push_back(0.99 * std::tanh(u[i++]));
    out.phi = pacf_to_ar(kappa);
    kappa.clear();
    for (int k = 0; k < spec_.q; ++k) kappa.push_back(0.99 * std::tanh(u[i++]));
    out.theta = pacf_to_ar(kappa);
    for (auto& t : out.theta) t = -t;

    const double omega_raw = u[i++];
    switch (spec_.family) {
      case VarianceFamily::kGarch: {
        out.omega = std::exp(omega_raw);
        auto w = bounded_simplex(u.data() + i, spec_.r + spec_.s);
        i += spec_.r + spec_.s;
        out.alpha.assign(w.begin(), w.begin() + spec_.r);
        out.beta.assign(w.begin() + spec_.r, w.end());
        break;
      }
      case VarianceFamily::kGjr: {
        out.omega = std::exp(omega_raw);
        auto w = bounded_simplex(u.data() + i, 2 * spec_.r + spec_.s);
        i += 2 * spec_.r + spec_.s;
        out.alpha.assign(w.begin(), w.begin() + spec_.r);
        for (int k = 0; k < spec_.r; ++k) out.gamma.push_back(2.0 * w[static_cast<std::size_t>(spec_.r + k)]);
        out.beta.assign(w.begin() + 2 * spec_.r, w.end());
        break;
      }
      case VarianceFamily::kEgarch: {
        out.omega = omega_raw;
        for (int k = 0; k < spec_.r; ++k) out.alpha.push_back(u[i++]);
        for (int k = 0; k < spec_.r; ++k) out.gamma.push_back(u[i++]);
        out.beta = bounded_simplex(u.data() + i, spec_.s);
        i += spec_.s;
        break;
      }
    }
    out.nu = 0.5 + 49.5 * logistic(u[i++]);
    out.xi = std::exp(1.6 * std::tanh(u[i++]));
    return out;
  }

  // Start point on unit-variance data with persistence `persist`, shock share `shock`.
  Eigen::VectorXd start(double mean, double persist, double shock, double nu, double xi,
                        const std::vector<double>& arma_jitter) const {
    Eigen::VectorXd u(dimension());
    int i = 0;
    u[i++] = mean;
    for (int k = 0; k < spec_.p + spec_.q; ++k) u[i++] = arma_jitter[static_cast<std::size_t>(k)];
    const double r = spec_.r, s = spec_.s;
    switch (spec_.family) {
      case VarianceFamily::kGarch: {
        u[i++] = std::log(1.0 - persist);
        std::vector<double> w;
        for (int k = 0; k < spec_.r; ++k) w.push_back(shock / r);
        for (int k = 0; k < spec_.s; ++k) w.push_back((persist - shock) / s);
        for (double v : simplex_logits(w)) u[i++] = v;
        break;
      }
      case VarianceFamily::kGjr: {
        u[i++] = std::log(1.0 - persist);
        std::vector<double> w;
        for (int k = 0; k < spec_.r; ++k) w.push_back(0.75 * shock / r);
        for (int k = 0; k < spec_.r; ++k) w.push_back(0.25 * shock / r);
        for (int k = 0; k < spec_.s; ++k) w.push_back((persist - shock) / s);
        for (double v : simplex_logits(w)) u[i++] = v;
        break;
      }
      case VarianceFamily::kEgarch: {
        u[i++] = 0.0;
        for (int k = 0; k < spec_.r; ++k) u[i++] = -0.05 / r;
        for (int k = 0; k < spec_.r; ++k) u[i++] = 2.0 * shock / r;
        std::vector<double> w;
        for (int k = 0; k < spec_.s; ++k) w.push_back(persist / s);
        for (double v : simplex_logits(w)) u[i++] = v;
        break;
      }
    }
    const double nu_p = (nu - 0.5) / 49.5;
    u[i++] = std::log(nu_p / (1.0 - nu_p));
    u[i++] = std::atanh(std::log(xi) / 1.6);
    return u;
  }

 private:
  ModelSpec spec_;
};

// Parameters estimated on returns divided by `scale`, restated for the raw returns.
VolParams unscale(VolParams p, const ModelSpec& spec, double scale) {
  p.mu *= scale;
  if (spec.family == VarianceFamily::kEgarch) {
    double beta_sum = 0.0;
    for (double b : p.beta) beta_sum += b;
    p.omega += (1.0 - beta_sum) * std::log(scale * scale);
  } else {
    p.omega *= scale * scale;
  }
  return p;
}

double sample_sd(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

}  // namespace

std::string to_string(VarianceFamily f) {
  switch (f) {
    case VarianceFamily::kGarch: return "garch";
    case VarianceFamily::kEgarch: return "egarch";
    case VarianceFamily::kGjr: return "gjr";
  }
  return "?";
}

VarianceFamily parse_family(const std::string& name) {
  if (name == "garch") return VarianceFamily::kGarch;
  if (name == "egarch") return VarianceFamily::kEgarch;
  if (name == "gjr") return VarianceFamily::kGjr;
  throw InputError("unknown variance family '" + name + "'");
}

int ModelSpec::parameter_count() const {
  return ParamMap(*this).dimension();
}

std::string ModelSpec::label() const {
  std::ostringstream os;
  os << "ARMA(" << p << "," << q << ")-" << to_string(family) << "(" << r << "," << s << ")";
  return os.str();
}

std::vector<ModelSpec> make_grid(const std::vector<VarianceFamily>& families, int lo, int hi) {
  std::vector<ModelSpec> grid;
  for (auto fam : families) {
    for (int p = lo; p <= hi; ++p)
      for (int q = lo; q <= hi; ++q)
        for (int r = std::max(lo, 1); r <= hi; ++r)
          for (int s = std::max(lo, 1); s <= hi; ++s) grid.push_back({p, q, r, s, fam});
  }
  std::stable_sort(grid.begin(), grid.end(),
                   [](const ModelSpec& a, const ModelSpec& b) { return a.total_order() < b.total_order(); });
  return grid;
}

Filtered filter(std::span<const double> returns, const ModelSpec& spec, const VolParams& prm) {
  const std::size_t n = returns.size();
  Filtered out;
  out.residuals.assign(n, 0.0);
  out.sigma2.assign(n, 0.0);

  std::vector<double> z(n);
  for (std::size_t t = 0; t < n; ++t) z[t] = returns[t] - prm.mu;
  for (std::size_t t = 0; t < n; ++t) {
    double e = z[t];
    for (int i = 1; i <= spec.p; ++i)
      if (t >= static_cast<std::size_t>(i)) e -= prm.phi[static_cast<std::size_t>(i - 1)] * z[t - i];
    for (int j = 1; j <= spec.q; ++j)
      if (t >= static_cast<std::size_t>(j)) e -= prm.theta[static_cast<std::size_t>(j - 1)] * out.residuals[t - j];
    out.residuals[t] = e;
  }
  double presample = 0.0;
  for (double e : out.residuals) presample += e * e;
  presample /= static_cast<double>(n);

  Sged dist(prm.nu, prm.xi);
  const auto& eps = out.residuals;
  auto& s2 = out.sigma2;
  double ll = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double v = 0.0;
    if (spec.family == VarianceFamily::kEgarch) {
      double logv = prm.omega;
      for (int k = 1; k <= spec.r; ++k) {
        const double eta = t >= static_cast<std::size_t>(k) ? eps[t - k] / std::sqrt(s2[t - k]) : 0.0;
        logv += prm.alpha[static_cast<std::size_t>(k - 1)] * eta +
                prm.gamma[static_cast<std::size_t>(k - 1)] * (std::abs(eta) - kAbsNormalMean);
      }
      for (int l = 1; l <= spec.s; ++l) {
        const double past = t >= static_cast<std::size_t>(l) ? std::log(s2[t - l]) : std::log(presample);
        logv += prm.beta[static_cast<std::size_t>(l - 1)] * past;
      }
      if (!(std::abs(logv) < 700.0)) {
        out.log_likelihood = kNegInf;
        return out;
      }
      v = std::exp(logv);
    } else {
      v = prm.omega;
      for (int k = 1; k <= spec.r; ++k) {
        if (t < static_cast<std::size_t>(k)) continue;
        const double e = eps[t - k];
        double a = prm.alpha[static_cast<std::size_t>(k - 1)];
        if (spec.family == VarianceFamily::kGjr && e < 0.0) a += prm.gamma[static_cast<std::size_t>(k - 1)];
        v += a * e * e;
      }
      for (int l = 1; l <= spec.s; ++l) {
        const double past = t >= static_cast<std::size_t>(l) ? s2[t - l] : presample;
        v += prm.beta[static_cast<std::size_t>(l - 1)] * past;
      }
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
      out.log_likelihood = kNegInf;
      return out;
    }
    s2[t] = v;
    ll += dist.log_density(eps[t] / std::sqrt(v)) - 0.5 * std::log(v);
  }
  out.log_likelihood = std::isfinite(ll) ? ll : kNegInf;
  return out;
}

VolFit fit(std::span<const double> returns, const ModelSpec& spec, const FitOptions& options) {
  const std::size_t n = returns.size();
  if (n < 10) throw DomainError("fit: series too short");
  for (double v : returns) {
    if (!std::isfinite(v)) throw DomainError("fit: non-finite return");
  }
  const double scale = sample_sd(returns);
  double peak = 0.0;
  for (double v : returns) peak = std::max(peak, std::abs(v));
  if (!(scale > 1e-12 * peak)) throw DegenerateVariance("fit: zero residual variance (constant series)");

  std::vector<double> x(returns.begin(), returns.end());
  double mean = 0.0;
  for (auto& v : x) {
    v /= scale;
    mean += v;
  }
  mean /= static_cast<double>(n);

  const ParamMap map(spec);
  const int dim = map.dimension();
  optim::Objective objective = [&](const Eigen::VectorXd& u) {
    const double ll = filter(x, spec, map.decode(u)).log_likelihood;
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };

  struct Design {
    double persist, shock, nu, xi;
  };
  static constexpr Design kDesigns[] = {
      {0.90, 0.08, 2.0, 1.0}, {0.95, 0.05, 1.5, 1.0}, {0.70, 0.15, 3.0, 1.0},
      {0.50, 0.10, 2.0, 0.9}, {0.97, 0.10, 1.2, 1.1},
  };

  Rng rng(options.seed);
  std::normal_distribution<double> jitter(0.0, 0.15);
  optim::NelderMeadOptions nm = options.simplex;
  if (nm.max_evaluations <= 0) nm.max_evaluations = 200 + 100 * dim;

  double best_value = std::numeric_limits<double>::infinity();
  double best_start = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_u;
  for (int k = 0; k < options.starts; ++k) {
    const Design d = kDesigns[k % std::size(kDesigns)];
    std::vector<double> arma(static_cast<std::size_t>(spec.p + spec.q), 0.0);
    if (k > 0) {
      for (auto& a : arma) a = jitter(rng);
    }
    const Eigen::VectorXd u0 = map.start(mean, d.persist, d.shock, d.nu, d.xi, arma);
    best_start = std::min(best_start, objective(u0));
    auto stage1 = optim::nelder_mead(objective, u0, nm);
    auto stage2 = optim::bfgs(objective, stage1.x, options.quasi_newton);
    if (stage2.value < best_value) {
      best_value = stage2.value;
      best_u = stage2.x;
    }
  }
  if (!std::isfinite(best_value)) throw NonConvergence("fit: no finite likelihood for " + spec.label());

  VolFit out;
  out.spec = spec;
  out.params = unscale(map.decode(best_u), spec, scale);
  auto filtered = filter(returns, spec, out.params);
  if (!std::isfinite(filtered.log_likelihood)) {
    throw NonConvergence("fit: optimum not finite on raw scale for " + spec.label());
  }
  out.log_likelihood = filtered.log_likelihood;
  out.best_start_log_likelihood = -best_start - static_cast<double>(n) * std::log(scale);
  out.bic = -2.0 * out.log_likelihood + spec.parameter_count() * std::log(static_cast<double>(n));
  out.sigma2 = std::move(filtered.sigma2);
  out.std_residuals.resize(n);
  for (std::size_t t = 0; t < n; ++t) out.std_residuals[t] = filtered.residuals[t] / std::sqrt(out.sigma2[t]);

  const auto& diag = options.diagnostics;
  if (!diag.enabled) {
    out.pr_resid_p = out.pr_sq_p = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  auto pvalue = [&](const std::vector<double>& series) {
    try {
      return pena_rodriguez_pvalue(series, diag.lags, diag.replications, diag.seed);
    } catch (const DomainError&) {
      return 0.0;
    }
  };
  std::vector<double> squared(n);
  for (std::size_t t = 0; t < n; ++t) squared[t] = out.std_residuals[t] * out.std_residuals[t];
  out.pr_resid_p = pvalue(out.std_residuals);
  out.pr_sq_p = pvalue(squared);
  out.diagnostics_failed = !(out.pr_resid_p > diag.level && out.pr_sq_p > diag.level);
  return out;
}

VolFit select_model(std::span<const double> returns, const std::vector<ModelSpec>& grid,
                    const SelectionOptions& options) {
  if (grid.empty()) throw InputError("select_model: empty grid");
  std::map<int, std::vector<std::size_t>> levels;
  for (std::size_t k = 0; k < grid.size(); ++k) levels[grid[k].total_order()].push_back(k);

  std::vector<VolFit> fits;
  std::string last_error;
  auto try_fit = [&](const ModelSpec& spec) {
    FitOptions fo = options.fit;
    // Seeded by the specification itself so lazy and full evaluation agree.
    fo.seed = derive_seed(options.fit.seed,
                          {static_cast<std::uint64_t>(spec.p), static_cast<std::uint64_t>(spec.q),
                           static_cast<std::uint64_t>(spec.r), static_cast<std::uint64_t>(spec.s),
                           static_cast<std::uint64_t>(spec.family)});
    try {
      fits.push_back(fit(returns, spec, fo));
      return true;
    } catch (const NonConvergence& e) {
      last_error = e.what();
      return false;
    }
  };
  auto better = [](const VolFit& a, const VolFit& b) {
    if (a.spec.total_order() != b.spec.total_order()) return a.spec.total_order() < b.spec.total_order();
    return a.bic < b.bic;
  };

  std::optional<std::size_t> chosen;
  for (const auto& [order, members] : levels) {
    for (std::size_t idx : members) try_fit(grid[idx]);
    for (std::size_t k = 0; k < fits.size(); ++k) {
      if (!fits[k].diagnostics_failed && (!chosen || better(fits[k], fits[*chosen]))) chosen = k;
    }
    if (chosen && options.lazy) break;
  }
  if (chosen) return fits[*chosen];
  if (fits.empty()) throw NonConvergence("select_model: every specification failed: " + last_error);

  const VolFit* best = &fits.front();
  for (const auto& f : fits) {
    if (f.bic < best->bic) best = &f;
  }
  VolFit fallback = *best;
  fallback.diagnostics_failed = true;
  return fallback;
}

std::vector<double> simulate_garch(std::size_t length, double mu, double omega, double alpha, double beta,
                                   double nu, double xi, Rng& rng, std::size_t burn_in) {
  Sged dist(nu, xi);
  double s2 = omega / std::max(1e-8, 1.0 - alpha - beta);
  double prev_eps = 0.0;
  std::vector<double> out;
  out.reserve(length);
  for (std::size_t t = 0; t < length + burn_in; ++t) {
    s2 = omega + alpha * prev_eps * prev_eps + beta * s2;
    prev_eps = std::sqrt(s2) * dist.sample(rng);
    if (t >= burn_in) out.push_back(mu + prev_eps);
  }
  return out;
}

}  // namespace gcnet

#include "gcnet/probit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <random>

#include "csv.hpp"
#include "gcnet/causality.hpp"
#include "gcnet/error.hpp"

namespace gcnet {

std::string to_string(SpatialModel m) { return m == SpatialModel::kSar ? "sar" : "sem"; }

SpatialDeterminant::SpatialDeterminant(const Eigen::MatrixXd& w) : w_(w) {
  if (w.rows() != w.cols()) throw DomainError("spatial weights must be square");
  symmetric_ = w.isApprox(w.transpose(), 1e-12) || (w - w.transpose()).cwiseAbs().maxCoeff() < 1e-14;
  if (symmetric_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
    values_ = es.eigenvalues().cast<std::complex<double>>();
    vectors_ = es.eigenvectors();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(w, false);
    values_ = es.eigenvalues();
  }
  double lo = 0.0, hi = 0.0;
  for (auto v : values_) {
    lo = std::min(lo, v.real());
    hi = std::max(hi, v.real());
  }
  lower_ = lo < -1e-12 ? 1.0 / lo : -1.0;
  upper_ = hi > 1e-12 ? 1.0 / hi : 1.0;
}

double SpatialDeterminant::log_det(double rho) const {
  double s = 0.0;
  for (auto v : values_) s += std::log(std::abs(1.0 - rho * v));
  return s;
}

Eigen::VectorXd SpatialDeterminant::solve(double rho, const Eigen::VectorXd& v) const {
  if (symmetric_) {
    Eigen::VectorXd c = vectors_.transpose() * v;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) /= 1.0 - rho * values_(k).real();
    return vectors_ * c;
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(w_.rows(), w_.cols()) - rho * w_;
  return a.partialPivLu().solve(v);
}

double truncated_normal_above(double a, Rng& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  if (a <= 0.0) {
    for (;;) {
      const double z = normal(rng);
      if (z > a) return z;
    }
  }
  // Exponential proposal with the optimal rate.
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a - std::log(1.0 - unif(rng)) / alpha;
    const double u = unif(rng);
    if (u <= std::exp(-0.5 * (z - alpha) * (z - alpha))) return z;
  }
}

ParamSummary summarize(const std::string& name, const std::vector<double>& draws) {
  ParamSummary s;
  s.name = name;
  if (draws.empty()) return s;
  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= static_cast<double>(draws.size());
  double ss = 0.0;
  for (double d : draws) ss += (d - mean) * (d - mean);
  s.mean = mean;
  s.sd = draws.size() > 1 ? std::sqrt(ss / static_cast<double>(draws.size() - 1)) : 0.0;
  if (s.sd > 0.0) {
    const double ratio = std::abs(mean) / s.sd;
    s.sig10 = ratio > normal_upper_quantile(0.05);
    s.sig05 = ratio > normal_upper_quantile(0.025);
    s.sig01 = ratio > normal_upper_quantile(0.005);
  }
  return s;
}

namespace {

struct State {
  Eigen::VectorXd ystar;
  Eigen::VectorXd beta;
  double rho = 0.0;
};

// Precision of the latent vector: (I - rho W)'(I - rho W).
Eigen::MatrixXd precision(const Eigen::MatrixXd& w, double rho) {
  const Eigen::Index n = w.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - rho * w;
  return a.transpose() * a;
}

}  // namespace

ProbitPosterior spatial_probit(const SpatialDesign& design, SpatialModel model, const ProbitOptions& options) {
  const Eigen::MatrixXd& X = design.X;
  const Eigen::VectorXd& y = design.y;
  const Eigen::MatrixXd& W = design.W;
  const Eigen::Index n = X.rows(), k = X.cols();
  if (y.size() != n || W.rows() != n || W.cols() != n) throw DomainError("spatial_probit: dimension mismatch");
  if (options.draws < 1 || options.burn_in < 0) throw DomainError("spatial_probit: invalid draw counts");
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < k) throw DomainError("spatial_probit: covariate matrix is rank deficient");
  }
  const double ones = y.sum();
  if (ones == 0.0 || ones == static_cast<double>(n)) throw DomainError("spatial_probit: all outcomes are equal");

  const bool no_neighbours = W.isZero(0.0);
  const bool spatial_step = !no_neighbours && !options.fixed_spatial;
  const SpatialDeterminant det(no_neighbours ? Eigen::MatrixXd::Zero(1, 1) : W);

  ProbitPosterior post;
  post.model = model;
  post.burn_in = options.burn_in;
  post.lower = det.lower();
  post.upper = det.upper();
  post.names = design.columns;
  post.names.resize(static_cast<std::size_t>(k));
  for (Eigen::Index c = 0; c < k; ++c) {
    if (post.names[static_cast<std::size_t>(c)].empty()) post.names[static_cast<std::size_t>(c)] = "x" + std::to_string(c);
  }
  post.names.push_back(model == SpatialModel::kSar ? "rho" : "lambda");

  Rng rng(options.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;

  const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
  const Eigen::MatrixXd xtx_chol = Eigen::LLT<Eigen::MatrixXd>(xtx_inv).matrixL();

  State st;
  st.rho = options.fixed_spatial.value_or(0.0);
  st.beta = Eigen::VectorXd::Zero(k);
  st.ystar = (y.array() * 2.0 - 1.0).matrix() * 0.5;

  Eigen::MatrixXd Q = no_neighbours ? Eigen::MatrixXd::Identity(n, n) : precision(W, st.rho);
  auto mean_of = [&](const State& s) -> Eigen::VectorXd {
    Eigen::VectorXd xb = X * s.beta;
    if (model == SpatialModel::kSar && !no_neighbours && s.rho != 0.0) return det.solve(s.rho, xb);
    return xb;
  };
  auto log_target = [&](double rho, const State& s) {
    Eigen::VectorXd resid;
    if (model == SpatialModel::kSar) {
      resid = s.ystar - rho * (W * s.ystar) - X * s.beta;
    } else {
      Eigen::VectorXd e = s.ystar - X * s.beta;
      resid = e - rho * (W * e);
    }
    return det.log_det(rho) - 0.5 * resid.squaredNorm();
  };

  double step = options.initial_step;
  int accepted = 0, tried = 0, window_accepted = 0, window_tried = 0;
  const int total = options.burn_in + options.draws;
  Eigen::VectorXd mu = mean_of(st);

  for (int it = 0; it < total; ++it) {
    // (a) latent sweep
    Eigen::VectorXd e = st.ystar - mu;
    Eigen::VectorXd r = Q * e;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double qii = Q(i, i);
      const double sd = 1.0 / std::sqrt(qii);
      const double cond = e(i) - r(i) / qii;  // conditional mean of e_i
      // Bound on e_i implied by the sign of y*_i.
      const double bound = (-mu(i) - cond) / sd;
      double z;
      if (y(i) > 0.5) {
        z = truncated_normal_above(bound, rng);
      } else {
        z = -truncated_normal_above(-bound, rng);
      }
      const double next = cond + sd * z;
      const double delta = next - e(i);
      if (delta != 0.0) {
        r.noalias() += delta * Q.col(i);
        e(i) = next;
      }
    }
    st.ystar = mu + e;

    // (b) beta
    Eigen::VectorXd z(k);
    for (Eigen::Index c = 0; c < k; ++c) z(c) = normal(rng);
    if (model == SpatialModel::kSar || no_neighbours || st.rho == 0.0) {
      Eigen::VectorXd target = st.ystar;
      if (model == SpatialModel::kSar && !no_neighbours && st.rho != 0.0) target -= st.rho * (W * st.ystar);
      st.beta = xtx_inv * (X.transpose() * target) + xtx_chol * z;
    } else {
      const Eigen::MatrixXd bx = X - st.rho * (W * X);
      const Eigen::VectorXd by = st.ystar - st.rho * (W * st.ystar);
      const Eigen::MatrixXd v = (bx.transpose() * bx).inverse();
      const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(v).matrixL();
      st.beta = v * (bx.transpose() * by) + l * z;
    }

    // (c) spatial parameter
    if (spatial_step) {
      const double proposal = st.rho + step * normal(rng);
      bool accept = false;
      if (proposal > det.lower() && proposal < det.upper()) {
        const double log_ratio = log_target(proposal, st) - log_target(st.rho, st);
        accept = std::log(unif(rng)) < log_ratio;
      }
      if (accept) {
        st.rho = proposal;
        Q = precision(W, st.rho);
      }
      if (it < options.burn_in) {
        window_accepted += accept;
        ++window_tried;
        if (window_tried == options.tune_every) {
          const double rate = static_cast<double>(window_accepted) / window_tried;
          if (rate < options.acceptance_low) step *= 0.7;
          if (rate > options.acceptance_high) step *= 1.4;
          window_accepted = window_tried = 0;
        }
      } else {
        accepted += accept;
        ++tried;
      }
    }
    mu = mean_of(st);

    if (it >= options.burn_in) {
      post.beta_draws.push_back(st.beta);
      post.spatial_draws.push_back(st.rho);
    }
  }

  post.acceptance = tried > 0 ? static_cast<double>(accepted) / tried : 0.0;
  post.step = step;
  for (Eigen::Index c = 0; c < k; ++c) {
    std::vector<double> d;
    d.reserve(post.beta_draws.size());
    for (const auto& b : post.beta_draws) d.push_back(b(c));
    post.summary.push_back(summarize(post.names[static_cast<std::size_t>(c)], d));
  }
  post.summary.push_back(summarize(post.names.back(), post.spatial_draws));
  return post;
}

ProbitPosterior sar_probit_mcmc(const SpatialDesign& design, const ProbitOptions& options) {
  return spatial_probit(design, SpatialModel::kSar, options);
}

ProbitPosterior sem_probit_mcmc(const SpatialDesign& design, const ProbitOptions& options) {
  return spatial_probit(design, SpatialModel::kSem, options);
}

void write_coefficients(std::ostream& out, int window, const ProbitPosterior& post, bool header) {
  if (header) out << "window,model,param,post_mean,post_sd,sig10,sig05,sig01\n";
  for (const auto& s : post.summary) {
    out << window << ',' << to_string(post.model) << ',' << s.name << ',' << csv::fmt(s.mean) << ','
        << csv::fmt(s.sd) << ',' << s.sig10 << ',' << s.sig05 << ',' << s.sig01 << '\n';
  }
}

namespace {

int band(const ParamSummary& s) {
  if (s.sig01) return 2;
  if (s.sig05) return 1;
  if (s.sig10) return 0;
  return -1;
}

}  // namespace

std::vector<SignificanceCount> count_significant(const std::vector<ProbitPosterior>& sar,
                                                 const std::vector<ProbitPosterior>& sem) {
  std::vector<SignificanceCount> out;
  auto slot = [&](const std::string& name) -> SignificanceCount& {
    // rho and lambda share the spatial row.
    const std::string key = name == "lambda" ? "rho" : name;
    for (auto& c : out) {
      if (c.param == key) return c;
    }
    out.push_back({key, {0, 0, 0}, {0, 0, 0}});
    return out.back();
  };
  for (const auto& p : sar) {
    for (const auto& s : p.summary) {
      auto& c = slot(s.name);
      if (int b = band(s); b >= 0) ++c.sar[static_cast<std::size_t>(b)];
    }
  }
  for (const auto& p : sem) {
    for (const auto& s : p.summary) {
      auto& c = slot(s.name);
      if (int b = band(s); b >= 0) ++c.sem[static_cast<std::size_t>(b)];
    }
  }
  return out;
}

void write_significance_table(std::ostream& out, const std::vector<SignificanceCount>& counts, int windows) {
  out << "param";
  for (const char* m : {"sar", "sem"}) {
    for (const char* b : {"sig10", "sig05", "sig01"}) out << ',' << m << '_' << b << ',' << m << '_' << b << "_pct";
  }
  out << '\n';
  for (const auto& c : counts) {
    out << c.param;
    for (const auto* v : {&c.sar, &c.sem}) {
      for (int n : *v) {
        out << ',' << n << ',' << csv::fixed(windows > 0 ? 100.0 * n / windows : 0.0, 2);
      }
    }
    out << '\n';
  }
}

}  // namespace gcnet

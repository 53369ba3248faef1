#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "gcnet/design.hpp"
#include "gcnet/error.hpp"
#include "gcnet/hac.hpp"
#include "gcnet/probit.hpp"

namespace {

gcnet::SpatialDesign toy_design(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.4);
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && coin(rng)) e.emplace_back(i, j);
  std::vector<int> closes;
  for (std::size_t i = 0; i < n; ++i) closes.push_back(static_cast<int>((i * 211) % 1440));
  return gcnet::build_design(gcnet::network_from_edges(n, e), closes, 0);
}

gcnet::MarketClock clock(const std::string& id, const std::string& tz, int hh, int mm) {
  gcnet::MarketClock c;
  c.market_id = id;
  c.timezone_id = tz;
  gcnet::ClockEpoch ep;
  ep.from = gcnet::Date::from_ymd(2000, 1, 1);
  ep.to = gcnet::Date::from_ymd(2020, 12, 31);
  ep.local_close_minutes = hh * 60 + mm;
  c.epochs.push_back(ep);
  return c;
}

std::vector<gcnet::Date> weekdays(gcnet::Date from, int count) {
  std::vector<gcnet::Date> out;
  for (gcnet::Date d = from; static_cast<int>(out.size()) < count; d = d + 1)
    if (!d.is_weekend()) out.push_back(d);
  return out;
}

}  // namespace

TEST(Design, SlotOrderIsColumnMajor) {
  const auto s = gcnet::edge_slots(3);
  const std::vector<gcnet::EdgeSlot> want{{1, 0}, {2, 0}, {0, 1}, {2, 1}, {0, 2}, {1, 2}};
  EXPECT_EQ(s, want);
}

TEST(Design, RawWeightsExample) {
  const auto s = gcnet::edge_slots(3);
  const auto w = gcnet::raw_slot_weights(3);
  auto idx = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < s.size(); ++k)
      if (s[k].source == i && s[k].target == j) return static_cast<Eigen::Index>(k);
    return Eigen::Index{-1};
  };
  // slot (0,1) neighbours (0,2) and (2,1) only
  const auto a = idx(0, 1);
  std::set<Eigen::Index> nb;
  for (Eigen::Index b = 0; b < w.cols(); ++b)
    if (w(a, b) != 0.0) nb.insert(b);
  EXPECT_EQ(nb, (std::set<Eigen::Index>{idx(0, 2), idx(2, 1)}));
}

TEST(Design, RawWeightsMatchEnumeration) {
  for (std::size_t n : {3u, 4u, 5u}) {
    const auto w = gcnet::raw_slot_weights(n);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if (i != j) pairs.emplace_back(i, j);
    for (std::size_t a = 0; a < pairs.size(); ++a)
      for (std::size_t b = 0; b < pairs.size(); ++b) {
        const bool share = a != b && (pairs[a].first == pairs[b].first || pairs[a].second == pairs[b].second);
        EXPECT_EQ(w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)), share ? 1.0 : 0.0);
      }
    EXPECT_TRUE(w.isApprox(w.transpose()));
  }
}

TEST(Design, StandardizedWeightsTwentyMarkets) {
  const auto w = gcnet::slot_weights(20);
  ASSERT_EQ(w.rows(), 380);
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    int nz = 0;
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      if (w(r, c) != 0.0) {
        ++nz;
        EXPECT_DOUBLE_EQ(w(r, c), 1.0 / 36.0);
      }
    }
    EXPECT_EQ(nz, 36);
  }
  EXPECT_THROW(gcnet::slot_weights(2), gcnet::DomainError);
}

TEST(Design, VecDevecRoundTrip) {
  std::vector<std::pair<std::size_t, std::size_t>> e{{0, 3}, {2, 1}, {3, 0}, {1, 2}};
  std::sort(e.begin(), e.end());
  const auto net = gcnet::network_from_edges(4, e);
  const auto y = gcnet::vec_edges(net);
  EXPECT_EQ(y.sum(), 4.0);
  EXPECT_EQ(gcnet::devec_edges(y, 4), e);
  EXPECT_THROW(gcnet::devec_edges(Eigen::VectorXd::Zero(5), 4), gcnet::DomainError);
}

TEST(Design, TimeCovariates) {
  const auto net = gcnet::network_from_edges(3, {{0, 1}});
  // closes in UTC minutes: US 21:00, UK 16:30, JP 06:00
  const std::vector<int> closes{1260, 990, 360};
  const auto d = gcnet::build_design(net, closes, 0);
  for (Eigen::Index k = 0; k < d.X.rows(); ++k) {
    EXPECT_GE(d.X(k, 1), 0.0);
    EXPECT_LT(d.X(k, 1), 1440.0);
    EXPECT_GE(d.X(k, 2), 0.0);
    EXPECT_LT(d.X(k, 2), 1440.0);
    const auto& s = d.slots[static_cast<std::size_t>(k)];
    EXPECT_EQ(d.X(k, 1), ((closes[s.target] - closes[s.source]) % 1440 + 1440) % 1440);
    if (s.target == 0) EXPECT_EQ(d.X(k, 2), 0.0);
  }
  EXPECT_EQ(gcnet::succession_minutes(1260, 360), 540);  // US to JP
  EXPECT_EQ(gcnet::succession_minutes(360, 1260), 900);

  gcnet::DesignOptions full;
  full.us_self_full_cycle = true;
  const auto f = gcnet::build_design(net, closes, 0, full);
  for (Eigen::Index k = 0; k < f.X.rows(); ++k)
    if (f.slots[static_cast<std::size_t>(k)].target == 0) EXPECT_EQ(f.X(k, 2), 1440.0);
}

TEST(Design, SharedDstLeavesCovariatesUnchanged) {
  gcnet::ClockSet clocks;
  clocks["US"] = clock("US", "America/New_York", 16, 0);
  clocks["UK"] = clock("UK", "Europe/London", 16, 30);
  clocks["DE"] = clock("DE", "Europe/Berlin", 17, 30);
  const auto net = gcnet::network_from_edges(3, {{0, 1}});
  auto named = net;
  named.vertices = {"US", "UK", "DE"};
  const auto winter = gcnet::build_design(named, clocks, "US", weekdays(gcnet::Date::from_ymd(2009, 1, 5), 60));
  const auto summer = gcnet::build_design(named, clocks, "US", weekdays(gcnet::Date::from_ymd(2009, 6, 1), 60));
  EXPECT_EQ(winter.X, summer.X);
  EXPECT_EQ(gcnet::majority_close_minute(clocks["UK"], weekdays(gcnet::Date::from_ymd(2009, 1, 5), 60)), 990);
  EXPECT_EQ(gcnet::majority_close_minute(clocks["UK"], weekdays(gcnet::Date::from_ymd(2009, 6, 1), 60)), 930);
  EXPECT_THROW(gcnet::build_design(named, clocks, "JP", weekdays(gcnet::Date::from_ymd(2009, 1, 5), 5)),
               gcnet::InputError);
}

TEST(TruncatedNormal, MomentsMatchClosedForm) {
  for (double a : {-2.0, 0.0, 0.7, 3.5}) {
    gcnet::Rng rng(42);
    const int n = 200000;
    double s = 0.0, s2 = 0.0, lo = INFINITY;
    for (int k = 0; k < n; ++k) {
      const double z = gcnet::truncated_normal_above(a, rng);
      s += z;
      s2 += z * z;
      lo = std::min(lo, z);
    }
    const double phi = std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI);
    const double tail = 0.5 * std::erfc(a / std::sqrt(2.0));
    const double lam = phi / tail;
    const double mean = lam, var = 1.0 + a * lam - lam * lam;
    EXPECT_GE(lo, a);
    EXPECT_NEAR(s / n, mean, 5.0 * std::sqrt(var / n)) << a;
    EXPECT_NEAR(s2 / n - (s / n) * (s / n), var, 0.02 * var + 1e-3) << a;
  }
}

TEST(SpatialDeterminant, MatchesDenseLogDet) {
  const auto w = gcnet::slot_weights(4);
  gcnet::SpatialDeterminant det(w);
  EXPECT_TRUE(det.symmetric() || !w.isApprox(w.transpose()));
  for (double rho : {-0.5, 0.0, 0.3, 0.8}) {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(w.rows(), w.cols()) - rho * w;
    EXPECT_NEAR(det.log_det(rho), std::log(std::abs(a.determinant())), 1e-9);
    const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(w.rows(), -1.0, 1.0);
    EXPECT_LT((a * det.solve(rho, v) - v).norm(), 1e-10);
  }
  EXPECT_NEAR(det.upper(), 1.0, 1e-9);
  EXPECT_LT(det.lower(), -1.0);
}

TEST(Probit, ReproducibleForSeed) {
  const auto d = toy_design(5, 1);
  gcnet::ProbitOptions o;
  o.draws = 150;
  o.burn_in = 50;
  o.seed = 7;
  for (auto m : {gcnet::SpatialModel::kSar, gcnet::SpatialModel::kSem}) {
    const auto a = gcnet::spatial_probit(d, m, o), b = gcnet::spatial_probit(d, m, o);
    EXPECT_EQ(a.spatial_draws, b.spatial_draws);
    ASSERT_EQ(a.beta_draws.size(), 150u);
    for (std::size_t k = 0; k < a.beta_draws.size(); ++k) EXPECT_EQ(a.beta_draws[k], b.beta_draws[k]);
    EXPECT_GE(a.acceptance, 0.0);
    EXPECT_LE(a.acceptance, 1.0);
    for (double r : a.spatial_draws) {
      EXPECT_GT(r, a.lower);
      EXPECT_LT(r, a.upper);
    }
    o.seed = 8;
    EXPECT_NE(gcnet::spatial_probit(d, m, o).spatial_draws, a.spatial_draws);
    o.seed = 7;
  }
}

TEST(Probit, NoNeighboursEqualsFixedZero) {
  auto d = toy_design(5, 2);
  gcnet::ProbitOptions o;
  o.draws = 100;
  o.burn_in = 20;
  o.fixed_spatial = 0.0;
  const auto fixed = gcnet::sar_probit_mcmc(d, o);
  d.W.setZero();
  o.fixed_spatial.reset();
  const auto none = gcnet::sar_probit_mcmc(d, o);
  ASSERT_EQ(fixed.beta_draws.size(), none.beta_draws.size());
  for (std::size_t k = 0; k < fixed.beta_draws.size(); ++k) EXPECT_EQ(fixed.beta_draws[k], none.beta_draws[k]);
  for (double r : none.spatial_draws) EXPECT_EQ(r, 0.0);
  const auto sem = gcnet::sem_probit_mcmc(d, o);
  for (std::size_t k = 0; k < fixed.beta_draws.size(); ++k) EXPECT_EQ(sem.beta_draws[k], none.beta_draws[k]);
}

TEST(Probit, BalancedInterceptOnlyCentresAtZero) {
  gcnet::SpatialDesign d;
  const Eigen::Index n = 380;
  d.y = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; k += 2) d.y(k) = 1.0;
  d.X = Eigen::MatrixXd::Ones(n, 1);
  d.W = Eigen::MatrixXd::Zero(n, n);
  d.columns = {"intercept"};
  gcnet::ProbitOptions o;
  o.draws = 2000;
  o.burn_in = 200;
  const auto post = gcnet::sar_probit_mcmc(d, o);
  ASSERT_FALSE(post.summary.empty());
  EXPECT_NEAR(post.summary[0].mean, 0.0, 0.1);
  EXPECT_FALSE(post.summary[0].sig10);
}

TEST(Probit, RejectsDegenerateInputs) {
  auto d = toy_design(4, 3);
  auto flat = d;
  flat.y.setOnes();
  EXPECT_THROW(gcnet::sar_probit_mcmc(flat), gcnet::DomainError);
  auto rank = d;
  rank.X.col(2) = 2.0 * rank.X.col(1);
  EXPECT_THROW(gcnet::sem_probit_mcmc(rank), gcnet::DomainError);
  auto dims = d;
  dims.W = Eigen::MatrixXd::Zero(3, 3);
  EXPECT_THROW(gcnet::sar_probit_mcmc(dims), gcnet::DomainError);
}

TEST(Probit, SummaryBands) {
  std::vector<double> draws(1000);
  for (std::size_t k = 0; k < draws.size(); ++k) draws[k] = 3.0 + ((k % 2) ? 1.0 : -1.0);
  const auto s = gcnet::summarize("x", draws);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_TRUE(s.sig01);
  const auto weak = gcnet::summarize("x", {-1.0, 1.0, -1.0, 1.5});
  EXPECT_FALSE(weak.sig10);
}

TEST(Hac, QuadraticSpectralKernel) {
  EXPECT_EQ(gcnet::qs_kernel(0.0), 1.0);
  for (double x : {1e-3, 0.2, 0.5, 1.0, 2.7, 10.0}) {
    const double z = 6.0 * M_PI * x / 5.0;
    EXPECT_NEAR(gcnet::qs_kernel(x), 3.0 / (z * z) * (std::sin(z) / z - std::cos(z)), 1e-9);
  }
  EXPECT_NEAR(gcnet::qs_kernel(1e-4), 1.0, 1e-6);
}

TEST(Hac, ExactLine) {
  std::vector<double> y(30);
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = 5.0 + 2.0 * static_cast<double>(t + 1);
  const auto r = gcnet::hac_trend(y);
  EXPECT_NEAR(r.slope, 2.0, 1e-12);
  EXPECT_NEAR(r.intercept, 5.0, 1e-10);
  EXPECT_NEAR(r.residual_variance, 0.0, 1e-18);
  EXPECT_EQ(r.stars(), "***");
  EXPECT_THROW(gcnet::hac_trend(std::vector<double>(5, 1.0)), gcnet::DomainError);
  EXPECT_NO_THROW(gcnet::hac_trend(std::vector<double>{1.0, 2.0, 4.0}, {}, false));
}

TEST(Hac, ZeroBandwidthIsWhite) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  std::vector<double> y(60);
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = 0.1 * static_cast<double>(t) + z(rng) * (1.0 + 0.05 * t);
  gcnet::HacOptions o;
  o.bandwidth = 0.0;
  o.small_sample = false;
  const auto r = gcnet::hac_trend(y, o);

  // closed-form OLS and sandwich with scalar sums
  const double n = static_cast<double>(y.size());
  double st = 0, stt = 0, sy = 0, sty = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double t = static_cast<double>(i + 1);
    st += t;
    stt += t * t;
    sy += y[i];
    sty += t * y[i];
  }
  const double det = n * stt - st * st;
  const double b1 = (n * sty - st * sy) / det, b0 = (sy - b1 * st) / n;
  // row 2 of (X'X)^{-1} is (-st, n)/det
  double meat = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double t = static_cast<double>(i + 1), e = y[i] - b0 - b1 * t;
    const double g = (-st + n * t) / det;
    meat += g * g * e * e;
  }
  EXPECT_NEAR(r.slope, b1, 1e-12);
  EXPECT_NEAR(r.se, std::sqrt(meat), 1e-12);
}

TEST(Hac, WhiteNoiseSize) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> z;
  int rejections = 0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> y(94);
    for (auto& v : y) v = z(rng);
    if (gcnet::hac_trend(y).p_value < 0.05) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / reps;
  // automatic-bandwidth HAC over-rejects somewhat at this length
  EXPECT_GE(rate, 0.03);
  EXPECT_LE(rate, 0.13);
}

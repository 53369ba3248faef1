#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "gcnet/error.hpp"
#include "gcnet/netmetrics.hpp"

namespace {

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

Edges random_edges(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(p);
  Edges e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && keep(rng)) e.emplace_back(i, j);
  return e;
}

// All-pairs shortest paths by Floyd-Warshall.
std::vector<double> floyd_harmonic(std::size_t n, const Edges& edges, bool incoming) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [a, b] : edges) {
    if (incoming) std::swap(a, b);
    d[a][b] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::vector<double> h(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && d[i][j] < inf) h[i] += 1.0 / d[i][j];
  return h;
}

std::vector<gcnet::CausalityDecision> decisions_for(const std::vector<std::string>& v, const Edges& edges) {
  std::set<std::pair<std::size_t, std::size_t>> on(edges.begin(), edges.end());
  std::vector<gcnet::CausalityDecision> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (i == j) continue;
      gcnet::CausalityDecision d;
      d.source = v[i];
      d.target = v[j];
      d.reject = on.count({i, j}) > 0;
      out.push_back(d);
    }
  return out;
}

}  // namespace

TEST(Network, EmptyGraph) {
  const auto net = gcnet::network_from_edges(5, {});
  for (std::size_t x = 0; x < 5; ++x) {
    EXPECT_EQ(net.out_degree[x], 0);
    EXPECT_EQ(net.in_degree[x], 0);
    EXPECT_EQ(net.harmonic[x], 0.0);
  }
  EXPECT_EQ(gcnet::centralization(net), 0.0);
}

TEST(Network, CompleteGraph) {
  Edges e;
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j)
      if (i != j) e.emplace_back(i, j);
  const auto net = gcnet::network_from_edges(20, e);
  for (std::size_t x = 0; x < 20; ++x) {
    EXPECT_EQ(net.out_degree[x], 19);
    EXPECT_EQ(net.in_degree[x], 19);
    EXPECT_DOUBLE_EQ(net.harmonic[x], 19.0);
  }
}

TEST(Network, StarAndPath) {
  const auto star = gcnet::network_from_edges(3, {{0, 1}, {0, 2}});
  EXPECT_EQ(star.out_degree[0], 2);
  EXPECT_EQ(star.in_degree[1], 1);
  EXPECT_EQ(star.harmonic[0], 2.0);
  EXPECT_EQ(star.harmonic[1], 0.0);

  const auto path = gcnet::network_from_edges(3, {{0, 1}, {1, 2}});
  EXPECT_DOUBLE_EQ(path.harmonic[0], 1.5);
  EXPECT_DOUBLE_EQ(path.harmonic[1], 1.0);
  EXPECT_EQ(path.harmonic[2], 0.0);
  EXPECT_DOUBLE_EQ(gcnet::harmonic_centrality(path, 2, true), 1.5);
}

TEST(Network, HarmonicMatchesFloydWarshall) {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 2 + rep % 19;
    const double p = 0.05 + 0.4 * (rep % 7) / 6.0;
    const auto e = random_edges(n, p, rng);
    for (bool incoming : {false, true}) {
      const auto net = gcnet::network_from_edges(n, e, incoming);
      const auto want = floyd_harmonic(n, e, incoming);
      for (std::size_t x = 0; x < n; ++x) EXPECT_NEAR(net.harmonic[x], want[x], 1e-12);
      EXPECT_EQ(gcnet::harmonic_all(net, incoming), gcnet::harmonic_all_serial(net, incoming));
    }
  }
}

TEST(Network, IncomingIsOutgoingOnTranspose) {
  std::mt19937_64 rng(3);
  const auto e = random_edges(12, 0.2, rng);
  Edges t;
  for (auto [a, b] : e) t.emplace_back(b, a);
  EXPECT_EQ(gcnet::network_from_edges(12, e, true).harmonic, gcnet::network_from_edges(12, t, false).harmonic);
}

TEST(Network, DegreeSumsEqualEdgeCount) {
  std::mt19937_64 rng(5);
  const auto e = random_edges(15, 0.3, rng);
  const auto net = gcnet::network_from_edges(15, e);
  int out = 0, in = 0;
  for (std::size_t x = 0; x < 15; ++x) {
    out += net.out_degree[x];
    in += net.in_degree[x];
  }
  EXPECT_EQ(out, static_cast<int>(e.size()));
  EXPECT_EQ(in, static_cast<int>(e.size()));
}

TEST(Network, RelabelingPermutesMetrics) {
  std::mt19937_64 rng(9);
  const std::size_t n = 10;
  const auto e = random_edges(n, 0.25, rng);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Edges pe;
  for (auto [a, b] : e) pe.emplace_back(perm[a], perm[b]);
  const auto a = gcnet::network_from_edges(n, e), b = gcnet::network_from_edges(n, pe);
  for (std::size_t x = 0; x < n; ++x) {
    EXPECT_EQ(a.out_degree[x], b.out_degree[perm[x]]);
    EXPECT_EQ(a.in_degree[x], b.in_degree[perm[x]]);
    EXPECT_NEAR(a.harmonic[x], b.harmonic[perm[x]], 1e-12);
  }
}

TEST(Network, BuildFromDecisions) {
  const std::vector<std::string> v{"A", "B", "C"};
  const auto net = gcnet::build_network(decisions_for(v, {{0, 1}, {2, 1}}), v, 4);
  EXPECT_EQ(net.window_index, 4);
  EXPECT_TRUE(net.has_edge(0, 1));
  EXPECT_TRUE(net.has_edge(2, 1));
  EXPECT_FALSE(net.has_edge(1, 0));
  EXPECT_EQ(net.in_degree[1], 2);
  EXPECT_EQ(net.index_of("C"), 2u);

  auto missing = decisions_for(v, {});
  missing.pop_back();
  EXPECT_THROW(gcnet::build_network(missing, v), gcnet::InputError);
  auto dup = decisions_for(v, {});
  dup.push_back(dup.front());
  EXPECT_THROW(gcnet::build_network(dup, v), gcnet::InputError);
  auto unknown = decisions_for(v, {});
  unknown[0].source = "Z";
  EXPECT_THROW(gcnet::build_network(unknown, v), gcnet::InputError);
}

TEST(Survival, MatchesSetOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 6;
    std::vector<gcnet::WindowNetwork> w;
    std::vector<std::set<std::pair<std::size_t, std::size_t>>> sets;
    for (int t = 0; t < 8; ++t) {
      auto e = random_edges(n, 0.5, rng);
      sets.emplace_back(e.begin(), e.end());
      w.push_back(gcnet::network_from_edges(n, e));
    }
    for (int t = 1; t < 8; ++t)
      for (int s = 1; s <= t; ++s) {
        auto common = sets[t - s];
        for (int k = t - s + 1; k <= t; ++k) {
          std::set<std::pair<std::size_t, std::size_t>> keep;
          for (const auto& x : common)
            if (sets[k].count(x)) keep.insert(x);
          common = keep;
        }
        const auto got = gcnet::survival_ratio(w, s, t);
        if (sets[t - s].empty()) {
          EXPECT_FALSE(got.has_value());
        } else {
          ASSERT_TRUE(got.has_value());
          EXPECT_DOUBLE_EQ(*got, static_cast<double>(common.size()) / sets[t - s].size());
        }
      }
  }
}

TEST(Survival, NestedIntersectionsShrink) {
  std::mt19937_64 rng(12);
  std::vector<gcnet::WindowNetwork> w;
  for (int t = 0; t < 10; ++t) w.push_back(gcnet::network_from_edges(8, random_edges(8, 0.6, rng)));
  // same base window, growing span: numerators can only shrink
  const int base = 2;
  double prev = 2.0;
  for (int t = base + 1; t < 10; ++t) {
    const auto r = gcnet::survival_ratio(w, t - base, t);
    ASSERT_TRUE(r.has_value());
    EXPECT_LE(*r, prev);
    prev = *r;
  }
}

TEST(Survival, Errors) {
  std::vector<gcnet::WindowNetwork> w{gcnet::network_from_edges(3, {}), gcnet::network_from_edges(3, {{0, 1}})};
  EXPECT_FALSE(gcnet::survival_ratio(w, 1, 1).has_value());
  EXPECT_THROW(gcnet::survival_ratio(w, 0, 1), gcnet::DomainError);
  EXPECT_THROW(gcnet::survival_ratio(w, 2, 1), gcnet::DomainError);
  EXPECT_THROW(gcnet::survival_ratio(w, 1, 2), gcnet::DomainError);
  w.push_back(gcnet::network_from_edges(4, {}));
  EXPECT_THROW(gcnet::survival_ratio(w, 1, 2), gcnet::DomainError);
  EXPECT_EQ(gcnet::survival_series(std::span(w).first(2), 12).size(), 1u);
}

TEST(Writers, EdgesMetricsSurvival) {
  const auto net = gcnet::network_from_edges(3, {{0, 1}});
  std::ostringstream e, s;
  gcnet::write_edges(e, net);
  EXPECT_EQ(e.str(), "source,target\nv0,v1\n");
  gcnet::write_survival(s, {{1, 1, std::nullopt}, {2, 1, 0.5}});
  EXPECT_EQ(s.str(), "t,s,ratio\n1,1,NA\n2,1,0.5\n");
  std::ostringstream d;
  gcnet::write_dot(d, net);
  EXPECT_NE(d.str().find("digraph"), std::string::npos);
  EXPECT_NE(d.str().find("\"v0\" -> \"v1\""), std::string::npos);
}

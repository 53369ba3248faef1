#include "gcnet/netmetrics.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <iterator>
#include <map>
#include <ostream>

#include "csv.hpp"
#include "gcnet/error.hpp"

namespace gcnet {

bool WindowNetwork::has_edge(std::size_t i, std::size_t j) const {
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::size_t WindowNetwork::index_of(const std::string& id) const {
  auto it = std::find(vertices.begin(), vertices.end(), id);
  if (it == vertices.end()) throw InputError("unknown market " + id);
  return static_cast<std::size_t>(it - vertices.begin());
}

namespace {

void finish(WindowNetwork& net, bool incoming) {
  std::sort(net.edges.begin(), net.edges.end());
  const std::size_t n = net.size();
  net.out_degree.assign(n, 0);
  net.in_degree.assign(n, 0);
  for (auto [i, j] : net.edges) {
    ++net.out_degree[i];
    ++net.in_degree[j];
  }
  net.harmonic = harmonic_all(net, incoming);
}

// Adjacency lists in the traversal direction.
std::vector<std::vector<std::size_t>> neighbours(const WindowNetwork& net, bool incoming) {
  std::vector<std::vector<std::size_t>> adj(net.size());
  for (auto [i, j] : net.edges) {
    if (incoming) {
      adj[j].push_back(i);
    } else {
      adj[i].push_back(j);
    }
  }
  return adj;
}

double bfs_harmonic(const std::vector<std::vector<std::size_t>>& adj, std::size_t x) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<std::size_t> queue{x};
  dist[x] = 0;
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (auto v : adj[u]) {
      if (dist[v] >= 0) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  // vertex order, so the sum does not depend on adjacency order
  double h = 0.0;
  for (int d : dist)
    if (d > 0) h += 1.0 / d;
  return h;
}

}  // namespace

WindowNetwork build_network(const std::vector<CausalityDecision>& decisions, const std::vector<std::string>& vertices,
                            int window_index, Date from, Date to, bool incoming) {
  WindowNetwork net;
  net.window_index = window_index;
  net.from = from;
  net.to = to;
  net.vertices = vertices;
  const std::size_t n = vertices.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < n; ++k) {
    if (!index.emplace(vertices[k], k).second) throw InputError("duplicate vertex " + vertices[k]);
  }
  std::vector<char> seen(n * n, 0);
  for (const auto& d : decisions) {
    auto si = index.find(d.source);
    auto ti = index.find(d.target);
    if (si == index.end() || ti == index.end()) {
      throw InputError("decision " + d.source + " -> " + d.target + " names an unknown market");
    }
    const auto i = si->second, j = ti->second;
    if (i == j) throw InputError("self-loop decision for " + d.source);
    if (seen[i * n + j]) throw InputError("duplicate decision " + d.source + " -> " + d.target);
    seen[i * n + j] = 1;
    if (d.reject) net.edges.emplace_back(i, j);
  }
  if (decisions.size() != n * (n - 1)) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && !seen[i * n + j]) {
          throw InputError("missing decision " + vertices[i] + " -> " + vertices[j]);
        }
      }
    }
  }
  finish(net, incoming);
  return net;
}

WindowNetwork network_from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                 bool incoming) {
  WindowNetwork net;
  for (std::size_t k = 0; k < n; ++k) net.vertices.push_back("v" + std::to_string(k));
  for (auto e : edges) {
    if (e.first >= n || e.second >= n || e.first == e.second) throw InputError("invalid edge");
    net.edges.push_back(e);
  }
  std::sort(net.edges.begin(), net.edges.end());
  net.edges.erase(std::unique(net.edges.begin(), net.edges.end()), net.edges.end());
  finish(net, incoming);
  return net;
}

double harmonic_centrality(const WindowNetwork& net, std::size_t x, bool incoming) {
  if (x >= net.size()) throw DomainError("harmonic_centrality: vertex out of range");
  return bfs_harmonic(neighbours(net, incoming), x);
}

std::vector<double> harmonic_all(const WindowNetwork& net, bool incoming) {
  const auto adj = neighbours(net, incoming);
  std::vector<double> h(net.size());
  const auto n = static_cast<std::ptrdiff_t>(net.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t x = 0; x < n; ++x) h[static_cast<std::size_t>(x)] = bfs_harmonic(adj, static_cast<std::size_t>(x));
  return h;
}

std::vector<double> harmonic_all_serial(const WindowNetwork& net, bool incoming) {
  const auto adj = neighbours(net, incoming);
  std::vector<double> h;
  h.reserve(net.size());
  for (std::size_t x = 0; x < net.size(); ++x) h.push_back(bfs_harmonic(adj, x));
  return h;
}

double centralization(const WindowNetwork& net) {
  double total = 0.0;
  for (double h : net.harmonic) total += h;
  return total;
}

std::optional<double> survival_ratio(std::span<const WindowNetwork> windows, int s, int t) {
  if (s < 1 || t < s || static_cast<std::size_t>(t) >= windows.size()) {
    throw DomainError("survival_ratio: need 1 <= s <= t < number of windows");
  }
  const auto& base = windows[static_cast<std::size_t>(t - s)];
  if (base.edges.empty()) return std::nullopt;
  std::vector<std::pair<std::size_t, std::size_t>> common = base.edges;
  for (int u = t - s + 1; u <= t; ++u) {
    const auto& w = windows[static_cast<std::size_t>(u)];
    if (w.vertices != base.vertices) throw DomainError("survival_ratio: windows have different vertex sets");
    std::vector<std::pair<std::size_t, std::size_t>> next;
    std::set_intersection(common.begin(), common.end(), w.edges.begin(), w.edges.end(), std::back_inserter(next));
    common.swap(next);
  }
  return static_cast<double>(common.size()) / static_cast<double>(base.edges.size());
}

std::vector<SurvivalRow> survival_series(std::span<const WindowNetwork> windows, int max_step) {
  std::vector<SurvivalRow> rows;
  for (int t = 1; t < static_cast<int>(windows.size()); ++t) {
    for (int s = 1; s <= std::min(t, max_step); ++s) rows.push_back({t, s, survival_ratio(windows, s, t)});
  }
  return rows;
}

void write_edges(std::ostream& out, const WindowNetwork& net) {
  out << "source,target\n";
  for (auto [i, j] : net.edges) out << net.vertices[i] << ',' << net.vertices[j] << '\n';
}

void write_metrics(std::ostream& out, const WindowNetwork& net, bool header) {
  if (header) out << "window,market,out_deg,in_deg,harmonic\n";
  for (std::size_t k = 0; k < net.size(); ++k) {
    out << net.window_index << ',' << net.vertices[k] << ',' << net.out_degree[k] << ',' << net.in_degree[k] << ','
        << csv::fmt(net.harmonic[k]) << '\n';
  }
}

void write_survival(std::ostream& out, const std::vector<SurvivalRow>& rows) {
  out << "t,s,ratio\n";
  for (const auto& r : rows) out << r.t << ',' << r.s << ',' << (r.ratio ? csv::fmt(*r.ratio) : "NA") << '\n';
}

void write_dot(std::ostream& out, const WindowNetwork& net) {
  const std::size_t n = net.size();
  const double top = n > 1 ? static_cast<double>(n - 1) : 1.0;
  out << "digraph window_" << net.window_index << " {\n";
  out << "  node [shape=circle, style=filled, fixedsize=true];\n";
  for (std::size_t k = 0; k < n; ++k) {
    const double width = 0.3 + 1.2 * net.out_degree[k] / top;
    // Grey level: 95% white at in-degree 0 down to 25% at the maximum.
    const int shade = static_cast<int>(95.0 - 70.0 * net.in_degree[k] / top + 0.5);
    char buf[128];
    std::snprintf(buf, sizeof buf, "  \"%s\" [width=%.3f, fillcolor=\"gray%d\"];\n", net.vertices[k].c_str(), width,
                  shade);
    out << buf;
  }
  for (auto [i, j] : net.edges) out << "  \"" << net.vertices[i] << "\" -> \"" << net.vertices[j] << "\";\n";
  out << "}\n";
}

}  // namespace gcnet

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcnet/causality.hpp"
#include "gcnet/date.hpp"

namespace gcnet {

/// Directed causality graph of one window. Vertex order is fixed by
/// construction; edges are (source, target) vertex indices, sorted.
struct WindowNetwork {
  int window_index = 0;
  Date from;
  Date to;
  std::vector<std::string> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<int> out_degree;
  std::vector<int> in_degree;
  std::vector<double> harmonic;

  std::size_t size() const { return vertices.size(); }
  bool has_edge(std::size_t i, std::size_t j) const;
  std::size_t index_of(const std::string& id) const;
};

/// One edge per rejected decision. Requires exactly one decision per
/// ordered pair of distinct vertices; throws InputError otherwise.
/// Harmonic centrality is filled in using outgoing (or incoming) paths.
WindowNetwork build_network(const std::vector<CausalityDecision>& decisions, const std::vector<std::string>& vertices,
                            int window_index = 0, Date from = {}, Date to = {}, bool incoming = false);

/// Network from an explicit edge list (used by simulations and tests).
WindowNetwork network_from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                 bool incoming = false);

/// Sum of 1/d(x, y) over y != x; d counts edges along (or against, when
/// `incoming`) the edge direction; unreachable vertices add 0.
double harmonic_centrality(const WindowNetwork& net, std::size_t x, bool incoming = false);

/// All vertices; OpenMP over source vertices.
std::vector<double> harmonic_all(const WindowNetwork& net, bool incoming = false);
std::vector<double> harmonic_all_serial(const WindowNetwork& net, bool incoming = false);

/// Sum of the vertex harmonic centralities.
double centralization(const WindowNetwork& net);

/// |E_t ∩ ... ∩ E_{t-s}| / |E_{t-s}|; nullopt when the denominator is 0.
/// Throws DomainError unless 1 <= s <= t < windows.size() and all windows share vertices.
std::optional<double> survival_ratio(std::span<const WindowNetwork> windows, int s, int t);

struct SurvivalRow {
  int t = 0;
  int s = 0;
  std::optional<double> ratio;
};

/// Every (t, s) with 1 <= s <= min(t, max_step).
std::vector<SurvivalRow> survival_series(std::span<const WindowNetwork> windows, int max_step);

/// `source,target`
void write_edges(std::ostream& out, const WindowNetwork& net);
/// `window,market,out_deg,in_deg,harmonic`; header when requested.
void write_metrics(std::ostream& out, const WindowNetwork& net, bool header = true);
/// `t,s,ratio`; missing ratios are written as NA.
void write_survival(std::ostream& out, const std::vector<SurvivalRow>& rows);
/// Graphviz digraph: node width grows with out-degree, fill darkens with in-degree.
void write_dot(std::ostream& out, const WindowNetwork& net);

}  // namespace gcnet

#include "gcnet/design.hpp"

#include <algorithm>
#include <map>

#include "gcnet/error.hpp"

namespace gcnet {

std::vector<EdgeSlot> edge_slots(std::size_t n) {
  std::vector<EdgeSlot> slots;
  slots.reserve(n * (n - 1));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) slots.push_back({i, j});
    }
  }
  return slots;
}

Eigen::MatrixXd raw_slot_weights(std::size_t n) {
  const auto slots = edge_slots(n);
  const auto m = static_cast<Eigen::Index>(slots.size());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      if (a == b) continue;
      const auto& sa = slots[static_cast<std::size_t>(a)];
      const auto& sb = slots[static_cast<std::size_t>(b)];
      if (sa.source == sb.source || sa.target == sb.target) w(a, b) = 1.0;
    }
  }
  return w;
}

Eigen::MatrixXd slot_weights(std::size_t n) {
  if (n < 3) throw DomainError("slot_weights: need at least three vertices");
  Eigen::MatrixXd w = raw_slot_weights(n);
  for (Eigen::Index r = 0; r < w.rows(); ++r) w.row(r) /= w.row(r).sum();
  return w;
}

Eigen::VectorXd vec_edges(const WindowNetwork& net) {
  const auto slots = edge_slots(net.size());
  Eigen::VectorXd y(static_cast<Eigen::Index>(slots.size()));
  for (std::size_t k = 0; k < slots.size(); ++k) {
    y(static_cast<Eigen::Index>(k)) = net.has_edge(slots[k].source, slots[k].target) ? 1.0 : 0.0;
  }
  return y;
}

std::vector<std::pair<std::size_t, std::size_t>> devec_edges(const Eigen::VectorXd& y, std::size_t n) {
  const auto slots = edge_slots(n);
  if (static_cast<std::size_t>(y.size()) != slots.size()) throw DomainError("devec_edges: length is not n(n-1)");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (y(static_cast<Eigen::Index>(k)) != 0.0) edges.emplace_back(slots[k].source, slots[k].target);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

int majority_close_minute(const MarketClock& clock, const std::vector<Date>& dates, const TzDatabase& tz) {
  std::map<int, int> counts;
  for (Date d : dates) {
    const auto m = utc_close_instant(clock, d, tz);
    ++counts[static_cast<int>(((m % 1440) + 1440) % 1440)];
  }
  if (counts.empty()) throw DomainError("majority_close_minute: no dates for " + clock.market_id);
  int best = counts.begin()->first, best_count = 0;
  for (auto [minute, c] : counts) {
    if (c > best_count) {
      best = minute;
      best_count = c;
    }
  }
  return best;
}

int succession_minutes(int from_minute, int to_minute) { return ((to_minute - from_minute) % 1440 + 1440) % 1440; }

SpatialDesign build_design(const WindowNetwork& net, const std::vector<int>& close_minutes, std::size_t us_index,
                           const DesignOptions& options) {
  const std::size_t n = net.size();
  if (n < 3) throw DomainError("build_design: need at least three markets");
  if (close_minutes.size() != n) throw DomainError("build_design: one close per market required");
  if (us_index >= n) throw DomainError("build_design: US market not among the vertices");

  SpatialDesign d;
  d.vertices = net.vertices;
  d.slots = edge_slots(n);
  d.y = vec_edges(net);
  d.W = slot_weights(n);
  const auto m = static_cast<Eigen::Index>(d.slots.size());
  d.X.resize(m, 3);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& s = d.slots[static_cast<std::size_t>(k)];
    d.X(k, 0) = 1.0;
    d.X(k, 1) = succession_minutes(close_minutes[s.source], close_minutes[s.target]);
    int to_us = succession_minutes(close_minutes[us_index], close_minutes[s.target]);
    if (s.target == us_index && options.us_self_full_cycle) to_us = 1440;
    d.X(k, 2) = to_us;
  }
  return d;
}

SpatialDesign build_design(const WindowNetwork& net, const ClockSet& clocks, const std::string& us_id,
                           const std::vector<Date>& dates, const DesignOptions& options, const TzDatabase& tz) {
  std::vector<int> closes;
  closes.reserve(net.size());
  for (const auto& id : net.vertices) {
    auto it = clocks.find(id);
    if (it == clocks.end()) throw InputError("no closing-hour metadata for " + id);
    closes.push_back(majority_close_minute(it->second, dates, tz));
  }
  if (!clocks.contains(us_id)) throw InputError("no closing-hour metadata for " + us_id);
  auto pos = std::find(net.vertices.begin(), net.vertices.end(), us_id);
  if (pos == net.vertices.end()) throw InputError("US market " + us_id + " is not in the network");
  return build_design(net, closes, static_cast<std::size_t>(pos - net.vertices.begin()), options);
}

}  // namespace gcnet

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gcnet/ingestion.hpp"
#include "gcnet/netmetrics.hpp"

namespace gcnet {

/// Ordered pair (source, target) of distinct vertices.
struct EdgeSlot {
  std::size_t source = 0;
  std::size_t target = 0;
  bool operator==(const EdgeSlot&) const = default;
};

/// Slots in column-major order of the edge-indicator matrix with the
/// diagonal removed: all sources of target 0, then of target 1, ...
std::vector<EdgeSlot> edge_slots(std::size_t n);

/// Raw slot adjacency: 1 when two distinct slots share a source or a target.
Eigen::MatrixXd raw_slot_weights(std::size_t n);
/// Row-standardized slot adjacency.
Eigen::MatrixXd slot_weights(std::size_t n);

/// Edge indicators in slot order, and back.
Eigen::VectorXd vec_edges(const WindowNetwork& net);
std::vector<std::pair<std::size_t, std::size_t>> devec_edges(const Eigen::VectorXd& y, std::size_t n);

struct SpatialDesign {
  std::vector<std::string> vertices;
  std::vector<EdgeSlot> slots;
  Eigen::VectorXd y;
  Eigen::MatrixXd X;  ///< columns: intercept, time_in_out, time_to_us (minutes)
  Eigen::MatrixXd W;
  std::vector<std::string> columns{"intercept", "time_in_out", "time_to_us"};
};

struct DesignOptions {
  /// Time to US for target = US: 0, or a full day when set.
  bool us_self_full_cycle = false;
};

/// Most frequent UTC close minute-of-day over the given dates (ties: earliest).
int majority_close_minute(const MarketClock& clock, const std::vector<Date>& dates,
                          const TzDatabase& tz = TzDatabase::pinned());

/// Minutes from `from_minute` forward to the next `to_minute`, in [0, 1440).
int succession_minutes(int from_minute, int to_minute);

/// Design for one window. `dates` are the window's trading dates used to
/// find each market's majority closing schedule. Throws InputError when a
/// vertex (or the US market) has no clock.
SpatialDesign build_design(const WindowNetwork& net, const ClockSet& clocks, const std::string& us_id,
                           const std::vector<Date>& dates, const DesignOptions& options = {},
                           const TzDatabase& tz = TzDatabase::pinned());

/// Design from close minutes given directly (one per vertex).
SpatialDesign build_design(const WindowNetwork& net, const std::vector<int>& close_minutes, std::size_t us_index,
                           const DesignOptions& options = {});

}  // namespace gcnet

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcnet/ingestion.hpp"

namespace gcnet {

struct SyntheticMarket {
  std::string id;
  std::string timezone;
  int close_local = 16 * 60;  ///< minutes after local midnight
};

struct SyntheticEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  double coefficient = 0.0;
};

/// Return panel where each market follows a GARCH(1,1) with SGED shocks plus
/// spillovers from the most recent return of each parent at its close.
/// Parents closing at the same instant act contemporaneously.
struct SyntheticSpec {
  std::vector<SyntheticMarket> markets;
  std::vector<SyntheticEdge> edges;
  double mu = 0.0;
  double omega = 2e-6;
  double alpha = 0.08;
  double beta = 0.90;
  double nu = 1.5;
  double xi = 1.0;
  Date start = Date::from_ymd(2006, 1, 2);
  Date end = Date::from_ymd(2013, 12, 31);  ///< inclusive
  double holiday_rate = 0.01;  ///< chance a market skips a weekday
  double initial_price = 100.0;
};

struct SyntheticPanel {
  PricePanel prices;
  ClockSet clocks;
};

/// Twenty markets spread over the usual trading zones with a few spillovers.
SyntheticSpec default_synthetic_spec();

/// Throws DomainError when same-instant edges form a cycle on some date,
/// or on invalid parameters.
SyntheticPanel simulate_panel(const SyntheticSpec& spec, std::uint64_t seed,
                              const TzDatabase& tz = TzDatabase::pinned());

/// Writes `<dir>/prices.csv` and `<dir>/markets.meta`.
void write_panel(const SyntheticPanel& panel, const std::string& dir);

}  // namespace gcnet

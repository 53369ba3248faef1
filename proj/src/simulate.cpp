#include "gcnet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "gcnet/error.hpp"
#include "gcnet/rng.hpp"
#include "gcnet/sged.hpp"

namespace gcnet {

SyntheticSpec default_synthetic_spec() {
  SyntheticSpec s;
  s.markets = {
      {"US", "America/New_York", 16 * 60},    {"CA", "America/Toronto", 16 * 60},
      {"UK", "Europe/London", 16 * 60 + 30},  {"IE", "Europe/Dublin", 16 * 60 + 30},
      {"PT", "Europe/Lisbon", 16 * 60 + 30},  {"DE", "Europe/Berlin", 17 * 60 + 30},
      {"FR", "Europe/Paris", 17 * 60 + 30},   {"NL", "Europe/Amsterdam", 17 * 60 + 30},
      {"BE", "Europe/Brussels", 17 * 60 + 30}, {"ES", "Europe/Madrid", 17 * 60 + 30},
      {"IT", "Europe/Rome", 17 * 60 + 30},    {"CH", "Europe/Zurich", 17 * 60 + 30},
      {"AT", "Europe/Vienna", 17 * 60 + 30},  {"SE", "Europe/Stockholm", 17 * 60 + 30},
      {"NO", "Europe/Oslo", 16 * 60 + 20},    {"FI", "Europe/Helsinki", 18 * 60 + 30},
      {"GR", "Europe/Athens", 17 * 60 + 20},  {"JP", "Asia/Tokyo", 15 * 60},
      {"HK", "Asia/Hong_Kong", 16 * 60},      {"AU", "Australia/Sydney", 16 * 60},
  };
  auto idx = [&](const char* id) {
    for (std::size_t k = 0; k < s.markets.size(); ++k) {
      if (s.markets[k].id == id) return k;
    }
    return std::size_t{0};
  };
  s.edges = {
      {idx("US"), idx("JP"), 0.3}, {idx("US"), idx("HK"), 0.3}, {idx("US"), idx("AU"), 0.3},
      {idx("US"), idx("DE"), 0.2}, {idx("DE"), idx("FR"), 0.3}, {idx("UK"), idx("US"), 0.2},
      {idx("JP"), idx("HK"), 0.2},
  };
  return s;
}

SyntheticPanel simulate_panel(const SyntheticSpec& spec, std::uint64_t seed, const TzDatabase& tz) {
  const std::size_t n = spec.markets.size();
  if (n == 0) throw DomainError("simulate_panel: no markets");
  if (spec.end < spec.start) throw DomainError("simulate_panel: end precedes start");
  if (!(spec.omega > 0.0) || spec.alpha < 0.0 || spec.beta < 0.0 || spec.alpha + spec.beta >= 1.0) {
    throw DomainError("simulate_panel: GARCH parameters must be positive and stationary");
  }
  if (spec.holiday_rate < 0.0 || spec.holiday_rate >= 1.0) throw DomainError("simulate_panel: holiday_rate in [0, 1)");
  std::vector<std::vector<std::pair<std::size_t, double>>> parents(n);
  for (const auto& e : spec.edges) {
    if (e.source >= n || e.target >= n || e.source == e.target) throw DomainError("simulate_panel: invalid edge");
    parents[e.target].emplace_back(e.source, e.coefficient);
  }

  SyntheticPanel out;
  for (const auto& m : spec.markets) {
    MarketClock c;
    c.market_id = m.id;
    c.timezone_id = m.timezone;
    c.epochs.push_back({spec.start, spec.end, m.close_local, AuctionPolicy::kLastPrice, 0});
    tz.zone(m.timezone);  // throws for unknown zones
    out.clocks.emplace(m.id, std::move(c));
    PriceSeries p;
    p.market_id = m.id;
    out.prices.push_back(std::move(p));
  }

  Rng rng(seed);
  std::bernoulli_distribution holiday(spec.holiday_rate);
  const Sged shock(spec.nu, spec.xi);
  std::vector<double> log_price(n, std::log(spec.initial_price));
  std::vector<double> s2(n, spec.omega / (1.0 - spec.alpha - spec.beta));
  std::vector<double> prev_eps(n, 0.0), prev_ret(n, 0.0), cur_ret(n, 0.0);
  std::vector<UtcMinute> instant(n);
  std::vector<char> done(n);
  std::vector<std::size_t> order(n);

  for (Date d = spec.start; d <= spec.end; d = d + 1) {
    if (d.is_weekend()) continue;
    for (std::size_t k = 0; k < n; ++k) instant[k] = utc_close_instant(out.clocks.at(spec.markets[k].id), d, tz);
    // Order by close instant; within a shared instant a parent precedes its children.
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return instant[a] < instant[b]; });
    std::fill(done.begin(), done.end(), 0);
    std::vector<std::size_t> sequence;
    sequence.reserve(n);
    for (std::size_t g = 0; g < n;) {
      std::size_t h = g;
      while (h < n && instant[order[h]] == instant[order[g]]) ++h;
      std::vector<std::size_t> pending(order.begin() + static_cast<std::ptrdiff_t>(g),
                                       order.begin() + static_cast<std::ptrdiff_t>(h));
      while (!pending.empty()) {
        bool progressed = false;
        for (auto it = pending.begin(); it != pending.end();) {
          bool ready = true;
          for (auto [p, c] : parents[*it]) {
            if (instant[p] == instant[*it] && !done[p]) ready = false;
          }
          if (ready) {
            done[*it] = 1;
            sequence.push_back(*it);
            it = pending.erase(it);
            progressed = true;
          } else {
            ++it;
          }
        }
        if (!progressed) throw DomainError("simulate_panel: same-instant spillovers form a cycle on " + d.iso());
      }
      g = h;
    }

    std::fill(done.begin(), done.end(), 0);
    for (auto j : sequence) {
      double mean = spec.mu;
      for (auto [i, c] : parents[j]) mean += c * (done[i] ? cur_ret[i] : prev_ret[i]);
      s2[j] = spec.omega + spec.alpha * prev_eps[j] * prev_eps[j] + spec.beta * s2[j];
      prev_eps[j] = std::sqrt(s2[j]) * shock.sample(rng);
      cur_ret[j] = mean + prev_eps[j];
      done[j] = 1;
    }
    for (std::size_t k = 0; k < n; ++k) {
      log_price[k] += cur_ret[k];
      prev_ret[k] = cur_ret[k];
      if (holiday(rng)) continue;
      out.prices[k].dates.push_back(d);
      out.prices[k].closes.push_back(std::exp(log_price[k]));
    }
  }
  return out;
}

void write_panel(const SyntheticPanel& panel, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream p(dir + "/prices.csv");
    if (!p) throw InputError("cannot write " + dir + "/prices.csv");
    write_prices(p, panel.prices);
  }
  std::ofstream m(dir + "/markets.meta");
  if (!m) throw InputError("cannot write " + dir + "/markets.meta");
  write_market_metadata(m, panel.clocks);
}

}  // namespace gcnet

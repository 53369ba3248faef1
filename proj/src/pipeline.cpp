#include "gcnet/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "gcnet/design.hpp"
#include "gcnet/error.hpp"
#include "gcnet/hac.hpp"
#include "gcnet/probit.hpp"
#include "gcnet/rng.hpp"

namespace fs = std::filesystem;

namespace gcnet {

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kFitStream = 1;
constexpr std::uint64_t kDiagnosticStream = 2;
constexpr std::uint64_t kProbitStream = 3;

int months_between(Date a, Date b) {
  return (b.year() - a.year()) * 12 + static_cast<int>(b.month()) - static_cast<int>(a.month());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_out(const std::string& path) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

std::string error_path(const StudyConfig& c, const Window& w) { return window_dir(c, w) + "/error.txt"; }

std::optional<std::string> window_error(const StudyConfig& c, const Window& w) {
  const auto p = error_path(c, w);
  if (!fs::exists(p)) return std::nullopt;
  return read_file(p);
}

void record_error(const StudyConfig& c, const Window& w, const std::string& stage, const std::string& what,
                  std::ostream& log) {
  auto out = open_out(error_path(c, w));
  out << stage << ": " << what << '\n';
  log << "window " << w.index << " (" << w.from.iso() << " .. " << w.to.iso() << "): " << stage
      << " failed: " << what << '\n';
}

std::size_t market_index(const StudyInputs& in, const std::string& id) {
  auto it = std::find(in.markets.begin(), in.markets.end(), id);
  if (it == in.markets.end()) throw InputError("unknown market " + id);
  return static_cast<std::size_t>(it - in.markets.begin());
}

std::vector<Date> window_dates(const StudyInputs& in, const Window& w) {
  std::set<Date> all;
  for (const auto& p : in.prices) {
    for (Date d : p.dates) {
      if (d >= w.from && d < w.to) all.insert(d);
    }
  }
  return {all.begin(), all.end()};
}

std::string params_text(const VolParams& p) {
  std::string s = "mu=" + csv::fmt(p.mu);
  auto list = [&](const char* name, const std::vector<double>& v) {
    for (std::size_t k = 0; k < v.size(); ++k) s += std::string(";") + name + std::to_string(k + 1) + "=" + csv::fmt(v[k]);
  };
  list("phi", p.phi);
  list("theta", p.theta);
  s += ";omega=" + csv::fmt(p.omega);
  list("alpha", p.alpha);
  list("gamma", p.gamma);
  list("beta", p.beta);
  s += ";nu=" + csv::fmt(p.nu) + ";xi=" + csv::fmt(p.xi);
  return s;
}

void write_fits(const StudyConfig& c, const WindowFits& f) {
  const auto dir = window_dir(c, f.window);
  auto fits = open_out(dir + "/fits.csv");
  fits << "market,window,p,q,r,s,family,loglik,bic,pr_resid_p,pr_sq_p,flag,params\n";
  auto res = open_out(dir + "/residuals.csv");
  res << "market,date,residual\n";
  for (const auto& m : f.markets) {
    if (m.fit) {
      const auto& v = *m.fit;
      fits << m.market << ',' << f.window.index << ',' << v.spec.p << ',' << v.spec.q << ',' << v.spec.r << ','
           << v.spec.s << ',' << to_string(v.spec.family) << ',' << csv::fmt(v.log_likelihood) << ','
           << csv::fmt(v.bic) << ',' << csv::fmt(v.pr_resid_p) << ',' << csv::fmt(v.pr_sq_p) << ','
           << (v.diagnostics_failed ? 1 : 0) << ',' << params_text(v.params) << '\n';
    }
    for (std::size_t k = 0; k < m.residuals.size(); ++k) {
      res << m.market << ',' << m.residuals.dates[k].iso() << ',' << csv::fmt(m.residuals.values[k]) << '\n';
    }
  }
}

WindowFits read_fits(const StudyConfig& c, const StudyInputs& in, const Window& w) {
  WindowFits f;
  f.window = w;
  std::map<std::string, MarketFit> by_market;
  for (const auto& id : in.markets) {
    MarketFit m;
    m.market = id;
    m.residuals.market_id = id;
    m.residuals.calendar = in.prices[market_index(in, id)].slice(w.from, w.to).dates;
    by_market.emplace(id, std::move(m));
  }
  std::istringstream text(read_file(window_dir(c, w) + "/residuals.csv"));
  std::string line;
  std::getline(text, line);
  if (csv::trim(line) != "market,date,residual") throw InputError("residuals.csv: bad header");
  while (std::getline(text, line)) {
    if (csv::trim(line).empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() != 3) throw InputError("residuals.csv: expected 3 fields");
    auto it = by_market.find(std::string(fields[0]));
    if (it == by_market.end()) throw InputError("residuals.csv: unknown market");
    auto v = csv::parse_double(fields[2]);
    if (!v) throw InputError("residuals.csv: bad number");
    it->second.residuals.dates.push_back(Date::parse(fields[1]));
    it->second.residuals.values.push_back(*v);
  }
  for (const auto& id : in.markets) f.markets.push_back(std::move(by_market.at(id)));
  return f;
}

WindowNetwork read_network(const StudyConfig& c, const StudyInputs& in, const Window& w) {
  std::istringstream text(read_file(window_dir(c, w) + "/edges.csv"));
  std::string line;
  std::getline(text, line);
  if (csv::trim(line) != "source,target") throw InputError("edges.csv: bad header");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  while (std::getline(text, line)) {
    if (csv::trim(line).empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() != 2) throw InputError("edges.csv: expected 2 fields");
    edges.emplace_back(market_index(in, std::string(fields[0])), market_index(in, std::string(fields[1])));
  }
  auto net = network_from_edges(in.markets.size(), edges, c.harmonic_incoming);
  net.vertices = in.markets;
  net.window_index = w.index;
  net.from = w.from;
  net.to = w.to;
  return net;
}

struct MetricRow {
  int out_deg = 0;
  int in_deg = 0;
  double harmonic = 0.0;
};

std::map<std::string, MetricRow> read_metrics(const StudyConfig& c, const Window& w) {
  std::istringstream text(read_file(window_dir(c, w) + "/metrics.csv"));
  std::string line;
  std::getline(text, line);
  std::map<std::string, MetricRow> rows;
  while (std::getline(text, line)) {
    if (csv::trim(line).empty()) continue;
    auto f = csv::split(line);
    if (f.size() != 5) throw InputError("metrics.csv: expected 5 fields");
    auto h = csv::parse_double(f[4]);
    auto o = csv::parse_double(f[2]);
    auto i = csv::parse_double(f[3]);
    if (!h || !o || !i) throw InputError("metrics.csv: bad number");
    rows[std::string(f[1])] = {static_cast<int>(*o), static_cast<int>(*i), *h};
  }
  return rows;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string window_dir(const StudyConfig& config, const Window& window) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", window.index);
  return config.output + "/windows/" + buf;
}

std::vector<Window> make_windows(Date first, Date last, int window_months, int drift_months) {
  if (window_months < 1 || drift_months < 1) throw DomainError("make_windows: window and drift must be positive");
  if (last < first) throw DomainError("make_windows: empty date range");
  const Date start = Date::from_ymd(first.year(), first.month(), 1);
  const int months = months_between(first, last) + 1;
  if (months < window_months) throw DomainError("make_windows: range shorter than one window");
  std::vector<Window> out;
  for (int m = 0; m + window_months <= months; m += drift_months) {
    out.push_back({static_cast<int>(out.size()) + 1, add_months(start, m), add_months(start, m + window_months)});
  }
  return out;
}

std::vector<Window> make_trading_windows(const std::vector<Date>& dates, int window_days, int drift_days) {
  if (window_days < 1 || drift_days < 1) throw DomainError("make_trading_windows: window and drift must be positive");
  if (dates.empty()) throw DomainError("make_trading_windows: empty date range");
  if (dates.size() < static_cast<std::size_t>(window_days)) {
    throw DomainError("make_trading_windows: range shorter than one window");
  }
  std::vector<Window> out;
  const auto w = static_cast<std::size_t>(window_days);
  for (std::size_t s = 0; s + w <= dates.size(); s += static_cast<std::size_t>(drift_days)) {
    const Date to = s + w < dates.size() ? dates[s + w] : dates.back() + 1;
    out.push_back({static_cast<int>(out.size()) + 1, dates[s], to});
  }
  return out;
}

StudyInputs load_inputs(const StudyConfig& config) {
  if (config.prices.empty()) throw InputError("config: 'prices' is required");
  if (config.metadata.empty()) throw InputError("config: 'metadata' is required");
  StudyInputs in;
  in.clocks = load_market_metadata(config.metadata);
  PriceCsvSchema schema;
  schema.markets = config.markets;
  auto panel = load_prices(config.prices, schema);
  std::map<std::string, FxSeries> fx;
  if (!config.fx.empty()) fx = load_fx(config.fx);
  for (auto& s : panel) {
    auto clock = in.clocks.find(s.market_id);
    if (clock == in.clocks.end()) throw InputError("no closing-hour metadata for market " + s.market_id);
    s.currency = clock->second.currency;
    if (s.currency != "USD") {
      if (fx.empty()) throw InputError("market " + s.market_id + " is quoted in " + s.currency + " but no FX file given");
      auto conv = convert_to_usd_dropping(s, find_usd_pair(fx, s.currency));
      in.fx_dropped += conv.dropped.size();
      s = std::move(conv.series);
    }
    in.markets.push_back(s.market_id);
  }
  in.prices = std::move(panel);
  if (in.markets.size() < 2) throw InputError("need at least two markets");
  if (config.probit && std::find(in.markets.begin(), in.markets.end(), config.us_market) == in.markets.end()) {
    throw InputError("US market '" + config.us_market + "' not among the price columns");
  }
  return in;
}

std::vector<Window> study_windows(const StudyConfig& config, const StudyInputs& inputs) {
  std::set<Date> all;
  for (const auto& p : inputs.prices) all.insert(p.dates.begin(), p.dates.end());
  if (all.empty()) throw InputError("price file has no observations");
  Date first = config.start.empty() ? *all.begin() : parse_month(config.start);
  Date last = config.end.empty() ? *all.rbegin() : parse_month(config.end);
  if (config.window_mode == WindowMode::kCalendar) {
    return make_windows(first, last, config.window_months, config.drift_months);
  }
  const Date stop = add_months(Date::from_ymd(last.year(), last.month(), 1), 1);
  std::vector<Date> dates;
  for (Date d : all) {
    if (d >= first && d < stop) dates.push_back(d);
  }
  return make_trading_windows(dates, config.window_days, config.drift_days);
}

WindowFits fit_window(const StudyInputs& inputs, const StudyConfig& config, const Window& window) {
  WindowFits out;
  out.window = window;
  SelectionOptions opts;
  opts.fit.starts = config.starts;
  opts.fit.diagnostics.level = config.diagnostic_level;
  opts.fit.diagnostics.lags = config.diagnostic_lags;
  opts.fit.diagnostics.replications = config.diagnostic_replications;
  opts.fit.diagnostics.seed = derive_seed(config.seed, {kDiagnosticStream});
  const auto grid = config.grid();
  for (std::size_t k = 0; k < inputs.markets.size(); ++k) {
    const auto& id = inputs.markets[k];
    try {
      const auto slice = inputs.prices[k].slice(window.from, window.to);
      if (slice.size() < 2) throw DomainError("no prices in window");
      const auto returns = compute_returns(slice, slice.dates);
      if (returns.size() < static_cast<std::size_t>(config.min_returns)) {
        throw DomainError(std::to_string(returns.size()) + " returns, fewer than min_returns");
      }
      opts.fit.seed = derive_seed(config.seed, {kFitStream, static_cast<std::uint64_t>(window.index), k});
      MarketFit m;
      m.market = id;
      m.fit = select_model(returns.values, grid, opts);
      m.residuals = returns;
      m.residuals.values = m.fit->std_residuals;
      out.markets.push_back(std::move(m));
    } catch (const std::exception& e) {
      out.error = id + ": " + e.what();
      out.markets.clear();
      return out;
    }
  }
  return out;
}

WindowTests test_window(const StudyInputs& inputs, const StudyConfig& config, const WindowFits& fits) {
  WindowTests out;
  out.window = fits.window;
  if (!fits.ok()) {
    out.error = fits.error;
    return out;
  }
  const std::size_t n = inputs.markets.size();
  const double level = bonferroni_level(config.level, n);
  std::vector<PriceSeries> slices;
  for (const auto& p : inputs.prices) slices.push_back(p.slice(fits.window.from, fits.window.to));
  std::vector<QInput> frames;
  try {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const auto common = pairwise_calendar(slices[i], slices[j]);
        const auto& ci = inputs.clocks.at(inputs.markets[i]);
        const auto& cj = inputs.clocks.at(inputs.markets[j]);
        const auto pair = align(rebase(fits.markets[i].residuals, common), rebase(fits.markets[j].residuals, common),
                                ci, cj);
        bool k0 = false;
        switch (config.instantaneous) {
          case InstantaneousRule::kAuto: k0 = closes_coincide(ci, cj, common); break;
          case InstantaneousRule::kAlways: k0 = true; break;
          case InstantaneousRule::kNever: k0 = false; break;
        }
        auto frame = lag_frame(pair, k0);
        if (frame.effect.size() <= static_cast<std::size_t>(config.bandwidth) + 1) {
          throw DomainError(inputs.markets[i] + " -> " + inputs.markets[j] + ": only " +
                            std::to_string(frame.effect.size()) + " aligned observations");
        }
        out.pairs.push_back({inputs.markets[i], inputs.markets[j], frame.effect.size(), pair.mixed_shift});
        CausalityDecision d;
        d.source = inputs.markets[i];
        d.target = inputs.markets[j];
        d.variant = k0 ? QVariant::kInstantaneous : QVariant::kLagged;
        d.length = frame.effect.size();
        out.decisions.push_back(d);
        frames.push_back(std::move(frame));
      }
    }
    const auto q = hong_q_batch(frames, config.bandwidth);
    for (std::size_t k = 0; k < q.size(); ++k) {
      auto d = decide(q[k], level);
      d.source = out.decisions[k].source;
      d.target = out.decisions[k].target;
      d.variant = out.decisions[k].variant;
      d.length = out.decisions[k].length;
      out.decisions[k] = d;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
    out.decisions.clear();
    out.pairs.clear();
  }
  return out;
}

void run_fit_stage(const StudyConfig& config, const StudyInputs& inputs, std::ostream& log) {
  const auto windows = study_windows(config, inputs);
  std::vector<WindowFits> results(windows.size());
  const auto count = static_cast<std::ptrdiff_t>(windows.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    results[static_cast<std::size_t>(k)] = fit_window(inputs, config, windows[static_cast<std::size_t>(k)]);
  }
  for (const auto& f : results) {
    fs::remove(error_path(config, f.window));
    if (!f.ok()) {
      fs::create_directories(window_dir(config, f.window));
      record_error(config, f.window, "fit", f.error, log);
      continue;
    }
    write_fits(config, f);
  }
}

void run_test_stage(const StudyConfig& config, const StudyInputs& inputs, std::ostream& log) {
  for (const auto& w : study_windows(config, inputs)) {
    if (window_error(config, w)) continue;
    WindowTests t;
    try {
      t = test_window(inputs, config, read_fits(config, inputs, w));
    } catch (const std::exception& e) {
      t.window = w;
      t.error = e.what();
    }
    if (!t.ok()) {
      record_error(config, w, "test", t.error, log);
      continue;
    }
    auto out = open_out(window_dir(config, w) + "/tests.csv");
    write_decisions(out, t.decisions);
    auto pairs = open_out(window_dir(config, w) + "/pairs.csv");
    pairs << "source,target,length,mixed_shift\n";
    for (const auto& p : t.pairs) {
      pairs << p.source << ',' << p.target << ',' << p.length << ',' << (p.mixed_shift ? 1 : 0) << '\n';
    }
  }
}

void run_network_stage(const StudyConfig& config, const StudyInputs& inputs, std::ostream& log) {
  const auto windows = study_windows(config, inputs);
  std::vector<std::optional<WindowNetwork>> nets;
  auto central = open_out(config.output + "/centralization.csv");
  central << "window,edges,centralization\n";
  for (const auto& w : windows) {
    if (window_error(config, w)) {
      nets.emplace_back();
      continue;
    }
    try {
      std::istringstream text(read_file(window_dir(config, w) + "/tests.csv"));
      auto net = build_network(read_decisions(text), inputs.markets, w.index, w.from, w.to, config.harmonic_incoming);
      auto edges = open_out(window_dir(config, w) + "/edges.csv");
      write_edges(edges, net);
      auto metrics = open_out(window_dir(config, w) + "/metrics.csv");
      write_metrics(metrics, net);
      auto dot = open_out(window_dir(config, w) + "/net.dot");
      write_dot(dot, net);
      central << w.index << ',' << net.edges.size() << ',' << csv::fmt(centralization(net)) << '\n';
      nets.emplace_back(std::move(net));
    } catch (const std::exception& e) {
      record_error(config, w, "network", e.what(), log);
      nets.emplace_back();
    }
  }

  // A ratio is missing when any window of its chain failed or the base is empty.
  auto out = open_out(config.output + "/survival.csv");
  out << "t,s,ratio\n";
  for (std::size_t t = 1; t < windows.size(); ++t) {
    for (std::size_t s = 1; s <= std::min(t, static_cast<std::size_t>(config.survival_max_step)); ++s) {
      std::optional<double> ratio;
      std::vector<WindowNetwork> chain;
      bool complete = true;
      for (std::size_t u = t - s; u <= t; ++u) {
        if (!nets[u]) {
          complete = false;
          break;
        }
        chain.push_back(*nets[u]);
      }
      if (complete) ratio = survival_ratio(chain, static_cast<int>(s), static_cast<int>(s));
      out << windows[t].index << ',' << s << ',' << (ratio ? csv::fmt(*ratio) : "NA") << '\n';
    }
  }
}

void run_probit_stage(const StudyConfig& config, const StudyInputs& inputs, std::ostream& log) {
  if (!config.probit) return;
  const auto windows = study_windows(config, inputs);
  struct Task {
    std::size_t window;
    SpatialModel model;
  };
  std::vector<Task> tasks;
  std::vector<std::optional<SpatialDesign>> designs(windows.size());
  for (std::size_t k = 0; k < windows.size(); ++k) {
    if (window_error(config, windows[k])) continue;
    try {
      const auto net = read_network(config, inputs, windows[k]);
      DesignOptions opts;
      opts.us_self_full_cycle = config.us_self_full_cycle;
      designs[k] = build_design(net, inputs.clocks, config.us_market, window_dates(inputs, windows[k]), opts);
      tasks.push_back({k, SpatialModel::kSar});
      tasks.push_back({k, SpatialModel::kSem});
    } catch (const std::exception& e) {
      log << "window " << windows[k].index << ": probit skipped: " << e.what() << '\n';
    }
  }
  std::vector<std::optional<ProbitPosterior>> posts(tasks.size());
  std::vector<std::string> errors(tasks.size());
  const auto count = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto& task = tasks[static_cast<std::size_t>(k)];
    ProbitOptions opts;
    opts.draws = config.probit_draws;
    opts.burn_in = config.probit_burn_in;
    opts.seed = derive_seed(config.seed, {kProbitStream, static_cast<std::uint64_t>(windows[task.window].index),
                                          static_cast<std::uint64_t>(task.model)});
    try {
      posts[static_cast<std::size_t>(k)] = spatial_probit(*designs[task.window], task.model, opts);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(k)] = e.what();
    }
  }
  // Probit failures leave the window's network intact; they are logged only.
  fs::create_directories(config.output + "/probit");
  for (std::size_t k = 0; k + 1 < tasks.size(); k += 2) {
    const auto& w = windows[tasks[k].window];
    char name[32];
    std::snprintf(name, sizeof name, "/probit/%03d.csv", w.index);
    const auto path = config.output + name;
    if (!posts[k] || !posts[k + 1]) {
      fs::remove(path);
      log << "window " << w.index << ": probit skipped: " << (posts[k] ? errors[k + 1] : errors[k]) << '\n';
      continue;
    }
    auto out = open_out(path);
    write_coefficients(out, w.index, *posts[k]);
    write_coefficients(out, w.index, *posts[k + 1], false);
  }
}

int run_report_stage(const StudyConfig& config, const StudyInputs& inputs, std::ostream& log) {
  using nlohmann::json;
  const auto windows = study_windows(config, inputs);
  std::map<std::string, std::vector<double>> series;
  json wins = json::array();
  int failed = 0;
  std::size_t decisions = 0;
  std::vector<ProbitPosterior> sar, sem;
  for (const auto& w : windows) {
    json entry = {{"index", w.index}, {"from", w.from.iso()}, {"to", (w.to - 1).iso()}};
    if (auto err = window_error(config, w)) {
      ++failed;
      entry["status"] = "failed";
      std::string msg = *err;
      while (!msg.empty() && msg.back() == '\n') msg.pop_back();
      entry["error"] = msg;
      wins.push_back(entry);
      continue;
    }
    entry["status"] = "ok";
    std::istringstream tests(read_file(window_dir(config, w) + "/tests.csv"));
    const auto dec = read_decisions(tests);
    decisions += dec.size();
    std::size_t edges = 0;
    for (const auto& d : dec) edges += d.reject;
    entry["decisions"] = dec.size();
    entry["edges"] = edges;
    {
      std::istringstream pairs(read_file(window_dir(config, w) + "/pairs.csv"));
      std::string line;
      std::getline(pairs, line);
      json mixed = json::array();
      while (std::getline(pairs, line)) {
        auto f = csv::split(line);
        if (f.size() == 4 && f[3] == "1") mixed.push_back(std::string(f[0]) + "->" + std::string(f[1]));
      }
      entry["mixed_shift_pairs"] = mixed;
    }
    const auto metrics = read_metrics(config, w);
    double total = 0.0;
    for (const auto& id : inputs.markets) {
      const auto& m = metrics.at(id);
      series["out_deg:" + id].push_back(m.out_deg);
      series["in_deg:" + id].push_back(m.in_deg);
      series["harmonic:" + id].push_back(m.harmonic);
      total += m.harmonic;
    }
    series["centralization"].push_back(total);
    series["edges"].push_back(static_cast<double>(edges));

    char name[32];
    std::snprintf(name, sizeof name, "/probit/%03d.csv", w.index);
    if (config.probit && fs::exists(config.output + name)) {
      // Rebuild summaries from the coefficient file.
      std::istringstream text(read_file(config.output + name));
      std::string line;
      std::getline(text, line);
      ProbitPosterior ps, pe;
      ps.model = SpatialModel::kSar;
      pe.model = SpatialModel::kSem;
      while (std::getline(text, line)) {
        auto f = csv::split(line);
        if (f.size() != 8) continue;
        ParamSummary s;
        s.name = std::string(f[2]);
        s.mean = csv::parse_double(f[3]).value_or(0.0);
        s.sd = csv::parse_double(f[4]).value_or(0.0);
        s.sig10 = f[5] == "1";
        s.sig05 = f[6] == "1";
        s.sig01 = f[7] == "1";
        (f[1] == "sar" ? ps : pe).summary.push_back(s);
      }
      sar.push_back(ps);
      sem.push_back(pe);
      entry["probit"] = true;
    } else {
      entry["probit"] = false;
    }
    wins.push_back(entry);
  }

  {
    auto out = open_out(config.output + "/trends.csv");
    write_trend_header(out);
    for (const auto& [name, values] : series) {
      if (values.size() < 8) {
        out << name << ',' << values.size() << ",NA,NA,NA,NA,\n";
        continue;
      }
      write_trend(out, name, hac_trend(values));
    }
  }
  if (config.probit) {
    auto out = open_out(config.output + "/probit/summary.csv");
    write_significance_table(out, count_significant(sar, sem), static_cast<int>(sar.size()));
  }

  json manifest;
  manifest["config"] = json::parse(config.to_json());
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config.hash()));
  manifest["config_hash"] = hash;
  manifest["seeds"] = {{"base", config.seed},
                       {"diagnostics", derive_seed(config.seed, {kDiagnosticStream})},
                       {"fit", "derive_seed(base, {1, window, market})"},
                       {"probit", "derive_seed(base, {3, window, model})"}};
  manifest["markets"] = inputs.markets;
  manifest["fx_dropped_dates"] = inputs.fx_dropped;
  manifest["bonferroni_level"] = bonferroni_level(config.level, inputs.markets.size());
  manifest["windows"] = wins;
  manifest["totals"] = {{"windows", windows.size()},
                        {"failed_windows", failed},
                        {"decisions", decisions},
                        {"probit_windows", sar.size()}};
  auto out = open_out(config.output + "/manifest.json");
  out << manifest.dump(2) << '\n';
  log << windows.size() << " windows, " << failed << " failed, " << decisions << " causality decisions\n";
  return failed;
}

StudyReport run_study(const StudyConfig& config, std::ostream& log) {
  config.validate();
  StudyReport report;
  auto t0 = std::chrono::steady_clock::now();
  const auto inputs = load_inputs(config);
  report.timing.push_back({"ingest", seconds_since(t0)});
  report.windows = static_cast<int>(study_windows(config, inputs).size());
  // Stale outputs from an earlier run must not leak into this bundle.
  fs::remove_all(config.output + "/windows");
  fs::remove_all(config.output + "/probit");

  t0 = std::chrono::steady_clock::now();
  run_fit_stage(config, inputs, log);
  report.timing.push_back({"fit", seconds_since(t0)});
  t0 = std::chrono::steady_clock::now();
  run_test_stage(config, inputs, log);
  report.timing.push_back({"test", seconds_since(t0)});
  t0 = std::chrono::steady_clock::now();
  run_network_stage(config, inputs, log);
  report.timing.push_back({"network", seconds_since(t0)});
  t0 = std::chrono::steady_clock::now();
  run_probit_stage(config, inputs, log);
  report.timing.push_back({"probit", seconds_since(t0)});
  t0 = std::chrono::steady_clock::now();
  report.failed_windows = run_report_stage(config, inputs, log);
  report.timing.push_back({"report", seconds_since(t0)});

  nlohmann::json timing = nlohmann::json::object();
  for (const auto& s : report.timing) timing[s.stage] = s.seconds;
  auto out = open_out(config.output + "/timing.json");
  out << timing.dump(2) << '\n';
  return report;
}

}  // namespace gcnet

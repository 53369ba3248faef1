// Command-line front end: one verb per pipeline stage plus `run` and `simulate`.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gcnet/config.hpp"
#include "gcnet/error.hpp"
#include "gcnet/pipeline.hpp"
#include "gcnet/simulate.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> prices, metadata, fx, output, us_market, start, end;
  std::optional<int> window_months, drift_months, bandwidth, starts, draws, burn_in;
  std::optional<double> level;
  std::optional<std::uint64_t> seed;
  bool incoming = false;
  bool no_probit = false;

  void add_to(CLI::App* app) {
    app->add_option("--config", config, "JSON study configuration");
    app->add_option("--prices", prices, "price CSV");
    app->add_option("--metadata", metadata, "market metadata file");
    app->add_option("--fx", fx, "FX CSV");
    app->add_option("--output", output, "output directory");
    app->add_option("--us-market", us_market, "market id used for the time-to-US covariate");
    app->add_option("--start", start, "first month, YYYY-MM");
    app->add_option("--end", end, "last month, YYYY-MM");
    app->add_option("--window-months", window_months);
    app->add_option("--drift-months", drift_months);
    app->add_option("--bandwidth", bandwidth, "kernel bandwidth M");
    app->add_option("--level", level, "family significance level");
    app->add_option("--starts", starts, "optimizer starts per model");
    app->add_option("--probit-draws", draws);
    app->add_option("--probit-burn-in", burn_in);
    app->add_option("--seed", seed, "base seed");
    app->add_flag("--harmonic-incoming", incoming, "harmonic centrality along incoming paths");
    app->add_flag("--no-probit", no_probit, "skip the spatial probit stage");
  }

  gcnet::StudyConfig resolve() const {
    gcnet::StudyConfig c = config.empty() ? gcnet::StudyConfig{} : gcnet::load_config(config);
    if (prices) c.prices = *prices;
    if (metadata) c.metadata = *metadata;
    if (fx) c.fx = *fx;
    if (output) c.output = *output;
    if (us_market) c.us_market = *us_market;
    if (start) c.start = *start;
    if (end) c.end = *end;
    if (window_months) c.window_months = *window_months;
    if (drift_months) c.drift_months = *drift_months;
    if (bandwidth) c.bandwidth = *bandwidth;
    if (starts) c.starts = *starts;
    if (draws) c.probit_draws = *draws;
    if (burn_in) c.probit_burn_in = *burn_in;
    if (level) c.level = *level;
    if (seed) c.seed = *seed;
    if (incoming) c.harmonic_incoming = true;
    if (no_probit) c.probit = false;
    c.validate();
    return c;
  }
};

struct SimulateArgs {
  std::string dir = "synthetic";
  std::uint64_t seed = 1;
  std::size_t markets = 20;
  std::string start = "2006-01-02";
  std::string end = "2013-12-31";
  double holiday_rate = 0.01;
  std::vector<std::string> edges;
  bool no_edges = false;
};

gcnet::SyntheticSpec make_spec(const SimulateArgs& a) {
  auto spec = gcnet::default_synthetic_spec();
  if (a.markets < 2 || a.markets > spec.markets.size()) {
    throw gcnet::InputError("--markets must be between 2 and " + std::to_string(spec.markets.size()));
  }
  spec.markets.resize(a.markets);
  std::vector<gcnet::SyntheticEdge> kept;
  for (const auto& e : spec.edges) {
    if (e.source < a.markets && e.target < a.markets) kept.push_back(e);
  }
  spec.edges = a.no_edges ? std::vector<gcnet::SyntheticEdge>{} : kept;
  if (!a.edges.empty()) {
    spec.edges.clear();
    auto index = [&](const std::string& id) {
      for (std::size_t k = 0; k < spec.markets.size(); ++k) {
        if (spec.markets[k].id == id) return k;
      }
      throw gcnet::InputError("unknown market " + id + " in --edge");
    };
    for (const auto& text : a.edges) {
      // SOURCE>TARGET:COEF
      const auto gt = text.find('>');
      const auto colon = text.find(':');
      if (gt == std::string::npos || colon == std::string::npos || colon < gt) {
        throw gcnet::InputError("--edge expects SOURCE>TARGET:COEF, got " + text);
      }
      spec.edges.push_back({index(text.substr(0, gt)), index(text.substr(gt + 1, colon - gt - 1)),
                            std::stod(text.substr(colon + 1))});
    }
  }
  spec.start = gcnet::Date::parse(a.start);
  spec.end = gcnet::Date::parse(a.end);
  spec.holiday_rate = a.holiday_rate;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lead-lag causality networks from daily closing prices"};
  app.require_subcommand(1);

  Overrides ov;
  auto* ingest = app.add_subcommand("ingest", "load and validate inputs, write USD prices");
  auto* fit = app.add_subcommand("fit", "fit volatility models per market and window");
  auto* test = app.add_subcommand("test", "causality tests on cached residuals");
  auto* network = app.add_subcommand("network", "networks, metrics and survival ratios");
  auto* probit = app.add_subcommand("probit", "spatial probit models per window");
  auto* report = app.add_subcommand("report", "trend regressions, probit summary, manifest");
  auto* run = app.add_subcommand("run", "every stage in order");
  for (auto* s : {ingest, fit, test, network, probit, report, run}) ov.add_to(s);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "write a synthetic price panel and metadata");
  simulate->add_option("--out", sim.dir, "output directory");
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--markets", sim.markets, "number of markets (2..20)");
  simulate->add_option("--start", sim.start, "first date, YYYY-MM-DD");
  simulate->add_option("--end", sim.end, "last date, YYYY-MM-DD");
  simulate->add_option("--holiday-rate", sim.holiday_rate);
  simulate->add_option("--edge", sim.edges, "spillover SOURCE>TARGET:COEF (repeatable)");
  simulate->add_flag("--no-edges", sim.no_edges, "no spillovers at all");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const auto panel = gcnet::simulate_panel(make_spec(sim), sim.seed);
      gcnet::write_panel(panel, sim.dir);
      std::cout << "wrote " << sim.dir << "/prices.csv and " << sim.dir << "/markets.meta\n";
      return 0;
    }
    const auto config = ov.resolve();
    if (run->parsed()) {
      const auto r = gcnet::run_study(config, std::cerr);
      return r.failed_windows > 0 ? 2 : 0;
    }
    const auto inputs = gcnet::load_inputs(config);
    if (ingest->parsed()) {
      std::filesystem::create_directories(config.output);
      std::ofstream out(config.output + "/prices_usd.csv");
      gcnet::write_prices(out, inputs.prices);
      std::cout << inputs.markets.size() << " markets, " << gcnet::study_windows(config, inputs).size()
                << " windows, " << inputs.fx_dropped << " dates dropped for missing FX\n";
      return 0;
    }
    if (fit->parsed()) gcnet::run_fit_stage(config, inputs, std::cerr);
    if (test->parsed()) gcnet::run_test_stage(config, inputs, std::cerr);
    if (network->parsed()) gcnet::run_network_stage(config, inputs, std::cerr);
    if (probit->parsed()) gcnet::run_probit_stage(config, inputs, std::cerr);
    if (report->parsed()) return gcnet::run_report_stage(config, inputs, std::cout) > 0 ? 2 : 0;
    return 0;
  } catch (const gcnet::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

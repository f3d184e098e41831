#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gcrelay/experiments.hpp"
#include "gcrelay/scenario.hpp"

namespace {

using namespace gcrelay;

struct Globals {
  std::string config;
  std::string scenario;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> workers;
  std::string out;
  bool no_mc = false;
};

Scenario build_scenario(const Globals& g, const std::string& fallback) {
  std::string base = g.scenario.empty() ? fallback : g.scenario;
  Scenario s = default_scenario(base);
  if (!g.config.empty()) {
    s.load_file(g.config);
    if (g.scenario.empty() && s.name != base) {
      s = default_scenario(s.name);
      s.load_file(g.config);
    }
  }
  for (const auto& kv : g.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    s.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) s.seed = *g.seed;
  if (g.trials) s.trials = *g.trials;
  if (g.workers) s.workers = *g.workers;
  return s;
}

void emit(const Globals& g, const Table& t) {
  if (g.out.empty() || g.out == "-") {
    std::cout << t.csv();
  } else {
    t.write(g.out);
    std::cerr << "wrote " << t.rows.size() << " rows to " << g.out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cognitive AF relay sensing, outage and energy experiments"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "INI scenario file")->check(CLI::ExistingFile);
  app.add_option("--scenario", g.scenario, "named defaults to start from");
  app.add_option("--set", g.sets, "override, e.g. --set power.lambda=5dB")->take_all();
  app.add_option("--seed", g.seed, "Monte Carlo seed");
  app.add_option("--trials", g.trials, "Monte Carlo trials per point");
  app.add_option("--workers", g.workers, "Monte Carlo worker threads");
  app.add_option("--out", g.out, "CSV output path (stdout when omitted)");
  app.add_flag("--no-mc", g.no_mc, "analytic columns only");

  std::string figure_name;
  auto* fig = app.add_subcommand("figure", "reproduce a figure or table as CSV");
  fig->add_option("name", figure_name, "fig3 fig4 fig6 fig7 fig8 table1")->required();

  double corrupt = 1.0;
  double z_limit = 4.0;
  auto* val = app.add_subcommand("validate", "analytic vs Monte Carlo report");
  val->add_option("--corrupt", corrupt, "scale every distance in the simulation by this factor");
  val->add_option("--z-limit", z_limit, "largest accepted |z|");

  std::optional<double> d_star;
  auto* opt = app.add_subcommand("optimize", "optimal sensing time");
  opt->add_option("--D-star", d_star, "minimum expected bits per frame");

  auto* det = app.add_subcommand("detect", "detection probability");
  auto* out = app.add_subcommand("outage", "outage and relay selection");
  auto* har = app.add_subcommand("harvest", "average harvested power per relay");
  auto* ene = app.add_subcommand("energy", "frame energy and ECG at the nominal sensing time");
  auto* keys = app.add_subcommand("keys", "list configuration keys");
  auto* show = app.add_subcommand("show", "print the resolved configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keys) {
      for (const auto& k : scenario_keys()) std::cout << k.key << "\t" << k.help << "\n";
      return 0;
    }
    if (*show) {
      std::cout << build_scenario(g, "default").dump();
      return 0;
    }
    if (*fig) {
      const Scenario s = build_scenario(g, figure_name);
      emit(g, run_figure(figure_name, s, RunOptions::from(s, !g.no_mc)));
      return 0;
    }
    if (*val) {
      const Scenario s = build_scenario(g, "default");
      ValidationOptions v;
      v.z_limit = z_limit;
      v.corrupt_distance = corrupt;
      bool pass = false;
      emit(g, validate(s, RunOptions::from(s, true), v, &pass));
      std::cerr << (pass ? "validate: all checks pass\n" : "validate: FAIL\n");
      return pass ? 0 : 1;
    }
    if (*opt) {
      Scenario s = build_scenario(g, "table1");
      if (d_star) s.D_star = *d_star;
      try {
        emit(g, optimize_report(s));
      } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        std::printf("max_achievable_bits,%s\n", num(e.max_bits()).c_str());
        return 2;
      }
      return 0;
    }
    const Scenario s = build_scenario(g, "default");
    const RunOptions run = RunOptions::from(s, !g.no_mc);
    if (*det) emit(g, detect_report(s, run));
    if (*out) emit(g, outage_report(s, run));
    if (*har) emit(g, harvest_report_table(s, run));
    if (*ene) emit(g, energy_report(s, run));
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

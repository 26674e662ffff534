// Command-line front end:
//   vqtherm <mode> [--config run.json] [--out file] [--format csv|json] [...]
// Modes: classify, stationary, evolve, sweep, engine, breakeven, validate.
// Flags override the corresponding configuration fields.  Exit codes:
//   0 success / validation passed
//   1 validation failed
//   2 configuration or parameter error
//   3 numerical guard breach (step size, truncation window)
#include "vqtherm/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Flags {
  std::string config, out, format, method, frame, sweep_param;
  std::optional<double> E1, E2, T1, T2, g, p, p2, T3, E3;
  std::optional<double> t_end, dt, edge_threshold, from, to;
  std::optional<int> record_every, steps, levels, half_width, n0;
};

void apply_overrides(vqtherm::ScenarioConfig& cfg, const Flags& fl) {
  using vqtherm::ConfigError;
  if (fl.E1) cfg.machine.E1 = *fl.E1;
  if (fl.E2) cfg.machine.E2 = *fl.E2;
  if (fl.T1) cfg.machine.T1 = *fl.T1;
  if (fl.T2) cfg.machine.T2 = *fl.T2;
  if (fl.g) cfg.machine.g = *fl.g;
  if (fl.p) cfg.machine.p = *fl.p;
  if (fl.p2) cfg.machine.p2 = *fl.p2;
  if (fl.T3) cfg.T3 = *fl.T3;

  vqtherm::TargetSpec spec = cfg.target.value_or(vqtherm::TargetSpec{});
  bool touched = cfg.target.has_value();
  if (fl.levels) {
    spec.kind = vqtherm::TargetSpec::Kind::Ladder;
    spec.levels = *fl.levels;
    touched = true;
  }
  if (fl.half_width) {
    spec.kind = vqtherm::TargetSpec::Kind::Weight;
    spec.half_width = *fl.half_width;
    touched = true;
  }
  if (fl.n0) {
    spec.kind = vqtherm::TargetSpec::Kind::Weight;
    spec.n0 = *fl.n0;
    touched = true;
  }
  if (fl.E3) {
    spec.gap = *fl.E3;
    touched = true;
  }
  if (touched) cfg.target = spec;

  if (fl.t_end) cfg.t_end = *fl.t_end;
  if (fl.dt) cfg.dt = *fl.dt;
  if (fl.record_every) cfg.record_every = *fl.record_every;
  if (fl.edge_threshold) cfg.edge_threshold = *fl.edge_threshold;
  if (!fl.method.empty()) {
    if (fl.method == "rk4") cfg.method = vqtherm::IntegrationMethod::Rk4;
    else if (fl.method == "expm") cfg.method = vqtherm::IntegrationMethod::Expm;
    else throw ConfigError("--method must be rk4 or expm");
  }
  if (!fl.frame.empty()) {
    if (fl.frame == "lab") cfg.frame = vqtherm::Frame::Lab;
    else if (fl.frame == "rotating") cfg.frame = vqtherm::Frame::Rotating;
    else throw ConfigError("--frame must be lab or rotating");
  }

  if (!fl.sweep_param.empty() || fl.from || fl.to || fl.steps) {
    vqtherm::SweepSpec sw = cfg.sweep.value_or(vqtherm::SweepSpec{});
    if (!fl.sweep_param.empty()) sw.param = fl.sweep_param;
    if (fl.from) sw.from = *fl.from;
    if (fl.to) sw.to = *fl.to;
    if (fl.steps) sw.steps = *fl.steps;
    cfg.sweep = sw;
  }
  if (!fl.format.empty()) cfg.format = vqtherm::parse_format(fl.format);
  if (!fl.out.empty()) cfg.out_path = fl.out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for the smallest self-contained quantum thermal "
               "machines (refrigerator / heat pump / heat engine)"};
  app.fallthrough();
  Flags fl;

  app.add_option("--config", fl.config, "JSON run configuration file");
  app.add_option("--out", fl.out, "write the result to this file (atomic)");
  app.add_option("--format", fl.format, "output format: csv or json");

  app.add_option("--E1", fl.E1, "machine qubit 1 gap");
  app.add_option("--E2", fl.E2, "machine qubit 2 gap (> E1)");
  app.add_option("--T1", fl.T1, "bath 1 temperature");
  app.add_option("--T2", fl.T2, "bath 2 temperature");
  app.add_option("--g", fl.g, "swap coupling strength");
  app.add_option("--p", fl.p, "reset rate (both baths unless --p2)");
  app.add_option("--p2", fl.p2, "distinct reset rate for bath 2");
  app.add_option("--T3", fl.T3, "target temperature for efficiency reporting");
  app.add_option("--E3", fl.E3, "target level spacing (default: E2 - E1)");
  app.add_option("--levels", fl.levels, "use a ladder target with this many levels");
  app.add_option("--half_width", fl.half_width, "weight window half width");
  app.add_option("--n0", fl.n0, "weight start level");

  app.add_option("--t_end", fl.t_end, "integration end time");
  app.add_option("--dt", fl.dt, "integration step-size bound");
  app.add_option("--record_every", fl.record_every, "sampling stride in steps");
  app.add_option("--method", fl.method, "integrator: rk4 or expm");
  app.add_option("--frame", fl.frame, "integration frame: lab or rotating");
  app.add_option("--edge_threshold", fl.edge_threshold,
                 "weight window truncation monitor threshold");

  app.add_option("--param", fl.sweep_param, "sweep parameter (E1,E2,T1,T2,g,p)");
  app.add_option("--from", fl.from, "sweep range start");
  app.add_option("--to", fl.to, "sweep range end");
  app.add_option("--steps", fl.steps, "sweep grid points (endpoints included)");

  app.require_subcommand(1);
  std::vector<std::pair<CLI::App*, vqtherm::ScenarioMode>> subs;
  subs.reserve(7);
  subs.emplace_back(app.add_subcommand("classify", "regime and virtual-qubit numbers"),
                    vqtherm::ScenarioMode::Classify);
  subs.emplace_back(app.add_subcommand("stationary", "stationary state of machine + target"),
                    vqtherm::ScenarioMode::Stationary);
  subs.emplace_back(app.add_subcommand("evolve", "time-evolution trace"),
                    vqtherm::ScenarioMode::Evolve);
  subs.emplace_back(app.add_subcommand("sweep", "classification/rates along a parameter grid"),
                    vqtherm::ScenarioMode::Sweep);
  subs.emplace_back(app.add_subcommand("engine", "weight run validated against closed-form rates"),
                    vqtherm::ScenarioMode::Engine);
  subs.emplace_back(app.add_subcommand("breakeven", "locate the |mean| = sigma crossing of the weight"),
                    vqtherm::ScenarioMode::Breakeven);
  subs.emplace_back(app.add_subcommand("validate", "fast identity/consistency battery"),
                    vqtherm::ScenarioMode::Validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    vqtherm::ScenarioConfig cfg;
    if (!fl.config.empty()) cfg = vqtherm::parse_config_file(fl.config);
    for (const auto& [sub, mode] : subs) {
      if (sub->parsed()) cfg.mode = mode;
    }
    apply_overrides(cfg, fl);

    const vqtherm::ScenarioOutcome oc = vqtherm::run_scenario(cfg);
    if (cfg.out_path) {
      vqtherm::write_file_atomic(*cfg.out_path, oc.document);
    } else {
      std::fwrite(oc.document.data(), 1, oc.document.size(), stdout);
    }
    return oc.exit_code;
  } catch (const vqtherm::GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const vqtherm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

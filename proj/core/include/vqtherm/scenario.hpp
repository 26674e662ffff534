// Scenario driver: JSON run configuration, the run modes behind the CLI, and
// deterministic CSV/JSON rendering with atomic file output.
#pragma once

#include "vqtherm/analytics.hpp"
#include "vqtherm/dynamics.hpp"

#include <string>
#include <vector>

namespace vqtherm {

enum class ScenarioMode {
  Classify,    // regime + virtual-qubit numbers for one machine
  Stationary,  // dense stationary state of machine + finite target
  Evolve,      // time evolution trace of machine + target
  Sweep,       // classification/rates along a parameter grid
  Engine,      // weight run validated against the closed-form rates
  Breakeven,   // long weight run locating the |mean| = sigma crossing
  Validate,    // fast identity/consistency battery for one machine
};

enum class OutputFormat { Csv, Json };

ScenarioMode parse_mode(const std::string& name);      // throws ConfigError
OutputFormat parse_format(const std::string& name);    // "csv" | "json"
std::string to_string(ScenarioMode m);
std::string to_string(OutputFormat f);

// Target description as configured; the level spacing defaults to the
// machine's virtual gap when materialized (after any parameter overrides).
struct TargetSpec {
  enum class Kind { Qubit, Ladder, Weight };
  Kind kind = Kind::Qubit;
  std::optional<double> gap{};  // E3 / ladder spacing / Ew
  std::optional<QubitTarget::Bath> bath{};  // qubit only
  int levels = 3;                           // ladder only
  int half_width = 30;                      // weight: window n0 +- half_width
  int n0 = 0;                               // weight start level
};

TargetSystem materialize(const TargetSpec& spec, const MachineParams& m);

struct SweepSpec {
  std::string param = "T2";  // E1, E2, T1, T2, g or p
  double from = 0.0;
  double to = 0.0;
  int steps = 2;  // number of grid points, endpoints included
};

// Ascending grid of `steps` evenly spaced points.  For T1/T2 sweeps the two
// regime-boundary values are inserted when they fall strictly inside the
// range, so classification flips happen exactly on a grid row.
std::vector<double> sweep_grid(const SweepSpec& spec, const MachineParams& m);

struct ScenarioConfig {
  ScenarioMode mode = ScenarioMode::Classify;
  MachineParams machine{};
  std::optional<TargetSpec> target{};
  std::optional<double> T3{};  // efficiency reporting (forbidden for engines)
  // Integration overrides; modes fill guard-respecting defaults.
  std::optional<double> t_end{};
  std::optional<double> dt{};
  std::optional<int> record_every{};
  std::optional<IntegrationMethod> method{};
  std::optional<Frame> frame{};
  std::optional<double> edge_threshold{};
  std::optional<SweepSpec> sweep{};
  std::optional<std::string> out_path{};
  std::optional<OutputFormat> format{};
};

// Strict parser: unknown keys, wrong types and missing required fields are
// ConfigErrors prefixed with `origin` (the file path).  machine.E1/E2/T1/T2
// are required; g and p default to 0.01.
ScenarioConfig parse_config_json(const std::string& text,
                                 const std::string& origin);
ScenarioConfig parse_config_file(const std::string& path);

struct ScenarioOutcome {
  int exit_code = 0;     // 0 pass, 1 validation failed (2/3 via exceptions)
  std::string document;  // rendered output, LF line endings
  OutputFormat format = OutputFormat::Csv;
};

// Executes the configured mode.  Throws ConfigError (exit 2) on invalid
// parameters and GuardError (exit 3) on step-size or truncation-window
// breaches.  The rendered document is byte-identical across reruns.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg);

// Writes content to path via a temporary file and an atomic rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace vqtherm

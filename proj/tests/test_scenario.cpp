#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vqtherm/scenario.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace vqtherm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "vqtherm_scenario_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  return std::string(std::istreambuf_iterator<char>(is), {});
}

ScenarioConfig engine_machine_cfg() {
  ScenarioConfig cfg;
  cfg.mode = ScenarioMode::Classify;
  cfg.machine.E1 = 1;
  cfg.machine.E2 = 2;
  cfg.machine.T1 = 1;
  cfg.machine.T2 = 4;
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(VQTHERM_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("mode and format names round-trip") {
  for (const char* name : {"classify", "stationary", "evolve", "sweep",
                           "engine", "breakeven", "validate"}) {
    CHECK(to_string(parse_mode(name)) == name);
  }
  CHECK(parse_format("csv") == OutputFormat::Csv);
  CHECK(parse_format("json") == OutputFormat::Json);
  CHECK_THROWS_WITH_AS(parse_mode("warp"), doctest::Contains("warp"),
                       ConfigError);
  CHECK_THROWS_AS(parse_format("yaml"), ConfigError);
}

TEST_CASE("config parser accepts a complete document") {
  const std::string text = R"({
    "mode": "evolve",
    "machine": {"E1": 1.0, "E2": 2.5, "T1": 1.5, "T2": 0.7,
                "g": 0.02, "p": 0.015, "p2": 0.015},
    "target": {"kind": "qubit", "E3": 1.5,
               "bath": {"T3": 0.9, "p3": 0.005}},
    "T3": 0.9,
    "integration": {"t_end": 120.0, "dt": 0.5, "record_every": 4,
                    "method": "expm", "frame": "rotating",
                    "edge_threshold": 1e-5},
    "output": {"path": "out.csv", "format": "csv"}
  })";
  const ScenarioConfig cfg = parse_config_json(text, "cfg.json");
  CHECK(cfg.mode == ScenarioMode::Evolve);
  CHECK(cfg.machine.E2 == 2.5);
  CHECK(cfg.machine.p2.has_value());
  REQUIRE(cfg.target.has_value());
  CHECK(cfg.target->kind == TargetSpec::Kind::Qubit);
  CHECK(cfg.target->gap == 1.5);
  REQUIRE(cfg.target->bath.has_value());
  CHECK(cfg.target->bath->T3 == 0.9);
  CHECK(cfg.T3 == 0.9);
  CHECK(cfg.t_end == 120.0);
  CHECK(cfg.method == IntegrationMethod::Expm);
  CHECK(cfg.frame == Frame::Rotating);
  CHECK(cfg.edge_threshold == 1e-5);
  CHECK(cfg.out_path == "out.csv");
  CHECK(cfg.format == OutputFormat::Csv);

  SUBCASE("g and p default when omitted") {
    const ScenarioConfig lean = parse_config_json(
        R"({"mode":"classify","machine":{"E1":1,"E2":2,"T1":1,"T2":4}})",
        "cfg.json");
    CHECK(lean.machine.g == 0.01);
    CHECK(lean.machine.p == 0.01);
    CHECK(!lean.machine.p2.has_value());
    CHECK(!lean.target.has_value());
  }
}

TEST_CASE("config parser rejects malformed documents with named locations") {
  const auto bad = [](const std::string& text) {
    return [text] { parse_config_json(text, "cfg.json"); };
  };
  CHECK_THROWS_WITH_AS(bad("{")(), doctest::Contains("cfg.json"), ConfigError);
  CHECK_THROWS_WITH_AS(bad(R"({"mode":"classify"})")(),
                       doctest::Contains("machine"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"classify","machine":{"E2":2,"T1":1,"T2":4}})")(),
      doctest::Contains("machine.E1"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"classify","machine":{"E1":1,"E2":2,"T1":1,"T2":4,"Tx":9}})")(),
      doctest::Contains("Tx"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"classify","banana":1,"machine":{"E1":1,"E2":2,"T1":1,"T2":4}})")(),
      doctest::Contains("banana"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"classify","machine":{"E1":"one","E2":2,"T1":1,"T2":4}})")(),
      doctest::Contains("E1"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"warp","machine":{"E1":1,"E2":2,"T1":1,"T2":4}})")(),
      doctest::Contains("warp"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"classify","machine":{"E1":1,"E2":2,"T1":1,"T2":4},
              "target":{"kind":"wheel"}})")(),
      doctest::Contains("kind"), ConfigError);
  // Per-kind key whitelists: a ladder has no half_width.
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"classify","machine":{"E1":1,"E2":2,"T1":1,"T2":4},
              "target":{"kind":"ladder","levels":3,"half_width":5}})")(),
      doctest::Contains("half_width"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"sweep","machine":{"E1":1,"E2":2,"T1":1,"T2":4},
              "sweep":{"param":"T2","from":0.5,"to":3}})")(),
      doctest::Contains("steps"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"sweep","machine":{"E1":1,"E2":2,"T1":1,"T2":4},
              "sweep":{"param":"T9","from":0.5,"to":3,"steps":4}})")(),
      doctest::Contains("sweep.param"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"classify","machine":{"E1":1,"E2":2,"T1":1,"T2":4},
              "integration":{"stepsize":0.1}})")(),
      doctest::Contains("stepsize"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"classify","machine":{"E1":1,"E2":2,"T1":1,"T2":4},
              "integration":{"method":"euler"}})")(),
      doctest::Contains("integration.method"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"classify","machine":{"E1":1,"E2":2,"T1":1,"T2":4},
              "integration":{"edge_threshold":0}})")(),
      doctest::Contains("edge_threshold"), ConfigError);
  CHECK_THROWS_WITH_AS(
      bad(R"({"mode":"classify","machine":{"E1":1,"E2":2,"T1":1,"T2":4},
              "output":{"path":""}})")(),
      doctest::Contains("path"), ConfigError);
}

TEST_CASE("target materialization defaults to the resonant gap") {
  MachineParams m;
  m.E1 = 0.8;
  m.E2 = 2.0;
  m.T1 = 1;
  m.T2 = 4;

  TargetSpec q;  // qubit, no explicit gap
  const auto tq = materialize(q, m);
  CHECK(std::get<QubitTarget>(tq).E3 == doctest::Approx(1.2).epsilon(1e-15));

  TargetSpec l;
  l.kind = TargetSpec::Kind::Ladder;
  l.levels = 4;
  const auto tl = materialize(l, m);
  CHECK(std::get<LadderTarget>(tl).levels == 4);
  CHECK(std::get<LadderTarget>(tl).E3 == doctest::Approx(1.2).epsilon(1e-15));

  TargetSpec w;
  w.kind = TargetSpec::Kind::Weight;
  w.half_width = 7;
  w.n0 = 2;
  const auto tw = materialize(w, m);
  CHECK(std::get<WeightTarget>(tw).n_min == -5);
  CHECK(std::get<WeightTarget>(tw).n_max == 9);
  CHECK(std::get<WeightTarget>(tw).n0 == 2);

  TargetSpec explicit_gap;
  explicit_gap.gap = 0.9;
  CHECK(std::get<QubitTarget>(materialize(explicit_gap, m)).E3 == 0.9);
}

TEST_CASE("sweep grids hit the regime boundaries exactly") {
  MachineParams m;
  m.E1 = 1;
  m.E2 = 2;
  m.T1 = 1;
  m.T2 = 1;

  SUBCASE("boundaries coincide with regular points: deduplicated") {
    const auto grid = sweep_grid({"T2", 0.5, 3.0, 6}, m);
    REQUIRE(grid.size() == 6);
    const double want[6] = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    for (int i = 0; i < 6; ++i) CHECK(grid[i] == want[i]);
  }

  SUBCASE("boundaries strictly inside are inserted") {
    const auto grid = sweep_grid({"T2", 0.4, 2.9, 6}, m);
    REQUIRE(grid.size() == 8);
    CHECK(grid.front() == 0.4);
    CHECK(grid.back() == 2.9);
    CHECK(std::find(grid.begin(), grid.end(), 1.0) != grid.end());
    CHECK(std::find(grid.begin(), grid.end(), 2.0) != grid.end());
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
  }

  SUBCASE("T1 sweeps insert their own boundaries") {
    // With T2 = 1 fixed: reversible at T1 = 1, inversion at T1 = E1/E2 * T2.
    const auto grid = sweep_grid({"T1", 0.25, 1.25, 2}, m);
    REQUIRE(grid.size() == 4);
    CHECK(grid[0] == 0.25);
    CHECK(grid[1] == 0.5);
    CHECK(grid[2] == 1.0);
    CHECK(grid[3] == 1.25);
  }

  SUBCASE("non-temperature parameters get the plain grid") {
    const auto grid = sweep_grid({"g", 0.01, 0.03, 3}, m);
    REQUIRE(grid.size() == 3);
    CHECK(grid[1] == doctest::Approx(0.02).epsilon(1e-15));
  }

  SUBCASE("degenerate ranges are rejected") {
    CHECK_THROWS_AS(sweep_grid({"T2", 3.0, 0.5, 6}, m), ConfigError);
    CHECK_THROWS_AS(sweep_grid({"T2", 0.5, 3.0, 1}, m), ConfigError);
  }
}

TEST_CASE("classify scenario reports the virtual qubit and efficiency") {
  ScenarioConfig cfg = engine_machine_cfg();
  cfg.format = OutputFormat::Json;
  const ScenarioOutcome out = run_scenario(cfg);
  CHECK(out.exit_code == 0);
  const json doc = json::parse(out.document);
  CHECK(doc.at("regime") == "HeatEngine");
  CHECK(doc.at("beta_v").get<double>() == -0.5);
  CHECK(doc.at("T_v").get<double>() == -2.0);
  CHECK(doc.at("efficiency").at("eta").get<double>() == 0.5);

  SUBCASE("virtual temperature is null on the inversion boundary") {
    cfg.machine.T2 = 2;
    const json b = json::parse(run_scenario(cfg).document);
    CHECK(b.at("regime") == "EngineBoundary");
    CHECK(b.at("T_v").is_null());
  }

  SUBCASE("fridge efficiency appears when T3 is supplied") {
    cfg.machine.T1 = 2;
    cfg.machine.T2 = 1;
    cfg.T3 = 0.8;
    const json f = json::parse(run_scenario(cfg).document);
    CHECK(f.at("regime") == "Refrigerator");
    CHECK(f.at("efficiency").at("eta").get<double>() == 1.0);
    CHECK(f.at("efficiency").at("eta_carnot").get<double>() ==
          doctest::Approx(2.0).epsilon(1e-14));
  }

  SUBCASE("an out-of-range target temperature degrades to a reported error") {
    cfg.machine.T1 = 2;
    cfg.machine.T2 = 1;
    cfg.T3 = 5.0;  // hotter than every bath: not a refrigerator load
    const ScenarioOutcome oo = run_scenario(cfg);
    CHECK(oo.exit_code == 0);
    const json f = json::parse(oo.document);
    CHECK(f.contains("efficiency_error"));
    CHECK(!f.contains("efficiency"));
  }

  SUBCASE("engines must not get a target temperature") {
    cfg.T3 = 0.5;
    CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  }
}

TEST_CASE("stationary scenario equilibrates a ladder to the virtual temperature") {
  ScenarioConfig cfg = engine_machine_cfg();
  cfg.mode = ScenarioMode::Stationary;
  TargetSpec ladder;
  ladder.kind = TargetSpec::Kind::Ladder;
  ladder.levels = 3;
  cfg.target = ladder;
  cfg.format = OutputFormat::Json;
  const ScenarioOutcome out = run_scenario(cfg);
  CHECK(out.exit_code == 0);
  const json doc = json::parse(out.document);
  CHECK(doc.at("nullspace_dim") == 1);
  CHECK(doc.at("residual").get<double>() <= 1e-12);
  CHECK(doc.at("target_temperature_estimate").get<double>() ==
        doctest::Approx(-2.0).epsilon(1e-10));
  const auto pops = doc.at("target_populations").get<std::vector<double>>();
  REQUIRE(pops.size() == 3);
  CHECK(std::abs(pops[0] - 0.18632372322584756) <= 1e-10);
  CHECK(std::abs(pops[1] - 0.3071958857184984) <= 1e-10);
  CHECK(std::abs(pops[2] - 0.506480391055654) <= 1e-10);
  CHECK(doc.at("predicted_trace_distance").get<double>() <= 1e-10);

  SUBCASE("weight targets have no stationary state to solve for") {
    TargetSpec w;
    w.kind = TargetSpec::Kind::Weight;
    cfg.target = w;
    CHECK_THROWS_WITH_AS(run_scenario(cfg), doctest::Contains("finite target"),
                         ConfigError);
  }
}

TEST_CASE("evolve scenario emits the full trace table") {
  ScenarioConfig cfg = engine_machine_cfg();
  cfg.mode = ScenarioMode::Evolve;
  cfg.t_end = 50.0;
  cfg.record_every = 10;
  cfg.frame = Frame::Rotating;
  const ScenarioOutcome out = run_scenario(cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.format == OutputFormat::Csv);

  std::vector<std::string> lines;
  std::istringstream is(out.document);
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  CHECK(lines[0] ==
        "t,energy_mean,energy_sq,energy_var,Zv,Nv,Zbar_v,Gamma1,Gamma2,"
        "Delta_im,dQ1,dQ2,dQ3,edge_lo,edge_hi,trace_err");
  CHECK(lines.size() >= 5);
  CHECK(lines[1].substr(0, 2) == "0,");
  CHECK(out.document.find('\r') == std::string::npos);
  CHECK(out.document.back() == '\n');

  SUBCASE("evolve requires a horizon") {
    cfg.t_end.reset();
    CHECK_THROWS_WITH_AS(run_scenario(cfg), doctest::Contains("t_end"),
                         ConfigError);
  }
}

TEST_CASE("sweep scenario rows flip regime exactly on the boundary rows") {
  ScenarioConfig cfg = engine_machine_cfg();
  cfg.mode = ScenarioMode::Sweep;
  cfg.sweep = SweepSpec{"T2", 0.4, 2.9, 6};
  const ScenarioOutcome out = run_scenario(cfg);
  CHECK(out.exit_code == 0);

  std::vector<std::string> lines;
  std::istringstream is(out.document);
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  REQUIRE(lines.size() == 9);  // header + 6 grid + 2 inserted boundaries
  CHECK(lines[0].substr(0, 24) == "T2,regime,beta_v,T_v,Zeq");

  const auto row_regime = [&](double x) {
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto a = lines[i].find(',');
      if (std::abs(std::strtod(lines[i].substr(0, a).c_str(), nullptr) - x) <=
          1e-12) {
        return lines[i].substr(a + 1, lines[i].find(',', a + 1) - a - 1);
      }
    }
    return std::string("missing");
  };
  CHECK(row_regime(0.4) == "Refrigerator");
  CHECK(row_regime(1.0) == "ReversibleBoundary");
  CHECK(row_regime(1.4) == "HeatPump");
  CHECK(row_regime(2.0) == "EngineBoundary");
  CHECK(row_regime(2.4) == "HeatEngine");
  // The boundary rows themselves are exact thanks to direct insertion.
  bool exact_one = false, exact_two = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    exact_one = exact_one || lines[i].rfind("1,", 0) == 0;
    exact_two = exact_two || lines[i].rfind("2,", 0) == 0;
  }
  CHECK(exact_one);
  CHECK(exact_two);

  // The inverted-bias boundary has zero rates; never rendered as "-0".
  CHECK(out.document.find("-0,") == std::string::npos);
  CHECK(out.document.find(",-0\n") == std::string::npos);

  SUBCASE("unequal reset rates suppress the closed-form rate columns") {
    cfg.machine.p2 = 0.02;
    const ScenarioOutcome o2 = run_scenario(cfg);
    std::istringstream is2(o2.document);
    std::string header;
    std::getline(is2, header);
    CHECK(header == "T2,regime,beta_v,T_v,Zeq,Neq,Zbar_eq");
  }

  SUBCASE("sweep mode needs a sweep block") {
    cfg.sweep.reset();
    CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  }
}

TEST_CASE("numbers are rendered with full round-trip precision") {
  ScenarioConfig cfg = engine_machine_cfg();
  cfg.format = OutputFormat::Csv;
  const ScenarioOutcome out = run_scenario(cfg);
  // Neq for (E1,E2,T1,T2) = (1,2,1,4) to 17 significant digits.
  CHECK(out.document.find("0.44340944198503701") != std::string::npos);
  CHECK(out.document.find("-0.5") != std::string::npos);  // beta_v
}

TEST_CASE("scenario documents are byte-stable across reruns") {
  ScenarioConfig cfg = engine_machine_cfg();
  cfg.format = OutputFormat::Json;
  CHECK(run_scenario(cfg).document == run_scenario(cfg).document);

  ScenarioConfig sweep = engine_machine_cfg();
  sweep.mode = ScenarioMode::Sweep;
  sweep.sweep = SweepSpec{"T2", 0.4, 2.9, 6};
  CHECK(run_scenario(sweep).document == run_scenario(sweep).document);
}

TEST_CASE("engine scenario validates the closed-form rates end to end") {
  ScenarioConfig cfg = engine_machine_cfg();
  cfg.mode = ScenarioMode::Engine;
  cfg.machine.g = 0.08;
  cfg.machine.p = 0.08;
  TargetSpec w;
  w.kind = TargetSpec::Kind::Weight;
  w.half_width = 12;
  cfg.target = w;
  const ScenarioOutcome out = run_scenario(cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.document.find("lift_rate") != std::string::npos);
  CHECK(out.document.find("heat_lift_balance") != std::string::npos);
  CHECK(out.document.find("fail") == std::string::npos);

  SUBCASE("strong coupling refuses the closed-form comparison") {
    cfg.machine.g = 0.5;
    CHECK_THROWS_AS(run_scenario(cfg), GuardError);
  }

  SUBCASE("engine mode needs a weight target") {
    TargetSpec q;
    cfg.target = q;
    CHECK_THROWS_WITH_AS(run_scenario(cfg), doctest::Contains("weight"),
                         ConfigError);
  }
}

TEST_CASE("breakeven scenario") {
  SUBCASE("zero-bias machines have no break-even point to find") {
    ScenarioConfig cfg = engine_machine_cfg();
    cfg.mode = ScenarioMode::Breakeven;
    cfg.machine.T2 = 2.0;
    CHECK_THROWS_AS(run_scenario(cfg), RegimeError);
  }

  SUBCASE("a horizon short of the crossing reports inconclusive") {
    ScenarioConfig cfg = engine_machine_cfg();
    cfg.mode = ScenarioMode::Breakeven;
    cfg.machine.g = 0.08;
    cfg.machine.p = 0.08;
    TargetSpec w;
    w.kind = TargetSpec::Kind::Weight;
    w.half_width = 8;
    cfg.target = w;
    cfg.t_end = 40.0;
    const ScenarioOutcome out = run_scenario(cfg);
    CHECK(out.exit_code == 1);
    CHECK(out.document.find("inconclusive") != std::string::npos);
  }
}

TEST_CASE("validate scenario passes its identity battery") {
  ScenarioConfig cfg = engine_machine_cfg();
  const ScenarioOutcome engine = [&] {
    ScenarioConfig c = cfg;
    c.mode = ScenarioMode::Validate;
    return run_scenario(c);
  }();
  CHECK(engine.exit_code == 0);
  CHECK(engine.document.find("bias_norm_identity") != std::string::npos);
  CHECK(engine.document.find("stationary_vs_predicted") != std::string::npos);
  CHECK(engine.document.find("efficiency_factorization") != std::string::npos);
  CHECK(engine.document.find("fail") == std::string::npos);

  ScenarioConfig fridge = cfg;
  fridge.mode = ScenarioMode::Validate;
  fridge.machine.T1 = 2;
  fridge.machine.T2 = 1;
  fridge.T3 = 0.8;
  const ScenarioOutcome f = run_scenario(fridge);
  CHECK(f.exit_code == 0);
  CHECK(f.document.find("fail") == std::string::npos);
}

TEST_CASE("atomic file writes") {
  const fs::path p = scratch_dir() / "atomic.txt";
  write_file_atomic(p.string(), "first\n");
  CHECK(slurp(p) == "first\n");
  write_file_atomic(p.string(), "second\n");
  CHECK(slurp(p) == "second\n");
  CHECK(!fs::exists(p.string() + ".tmp"));
  CHECK_THROWS_AS(
      write_file_atomic((scratch_dir() / "no_dir" / "x.txt").string(), "y"),
      Error);
  fs::remove(p);
}

TEST_CASE("command-line driver maps outcomes to exit codes") {
  const fs::path out = scratch_dir() / "cli_out";

  SUBCASE("classify writes a parseable document and exits 0") {
    fs::create_directories(out);
    const int rc = run_cli("classify --E1 1 --E2 2 --T1 1 --T2 4 "
                           "--format json --out " + (out / "c.json").string());
    CHECK(rc == 0);
    const json doc = json::parse(slurp(out / "c.json"));
    CHECK(doc.at("regime") == "HeatEngine");
  }

  SUBCASE("invalid machine parameters exit 2") {
    CHECK(run_cli("classify --E1 1 --E2 0.5 --T1 1 --T2 4 >/dev/null") == 2);
  }

  SUBCASE("unknown flags exit 2") {
    CHECK(run_cli("classify --warp 9 >/dev/null") == 2);
  }

  SUBCASE("config files with unknown keys exit 2") {
    fs::create_directories(out);
    const fs::path cfgp = out / "bad.json";
    write_file_atomic(cfgp.string(),
                      R"({"mode":"classify","machine":{"E1":1,"E2":2,"T1":1,"T2":4,"Q":1}})");
    CHECK(run_cli("classify --config " + cfgp.string() + " >/dev/null") == 2);
  }

  SUBCASE("step-size guard breaches exit 3") {
    CHECK(run_cli("evolve --E1 1 --E2 2 --T1 2 --T2 1 --t_end 1 --dt 0.5 "
                  "--frame lab >/dev/null") == 3);
  }

  SUBCASE("validate battery runs from flags alone and exits 0") {
    fs::create_directories(out);
    const fs::path vp = out / "v.csv";
    CHECK(run_cli("validate --E1 1 --E2 2 --T1 2 --T2 1 --T3 0.8 --out " +
                  vp.string()) == 0);
    const std::string doc = slurp(vp);
    CHECK(doc.find("pass") != std::string::npos);
    CHECK(doc.find("fail") == std::string::npos);
  }

  SUBCASE("sweep to stdout") {
    const fs::path sp = out / "s.csv";
    fs::create_directories(out);
    CHECK(run_cli("sweep --E1 1 --E2 2 --T1 1 --T2 1 --param T2 "
                  "--from 0.5 --to 3 --steps 6 > " + sp.string()) == 0);
    const std::string doc = slurp(sp);
    CHECK(doc.find("ReversibleBoundary") != std::string::npos);
    CHECK(doc.find("EngineBoundary") != std::string::npos);
  }
}

#include "vqtherm/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vqtherm {

using nlohmann::json;

namespace {

std::string fmt_num(double v) {
  if (v == 0.0) return "0";  // avoid "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw ConfigError(origin + ": " + msg);
}

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& where, const std::string& origin) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      fail(origin, "unknown key " + where + it.key());
    }
  }
}

const json& need_object(const json& obj, const char* key,
                        const std::string& origin) {
  if (!obj.contains(key)) fail(origin, std::string("missing required field ") + key);
  const json& v = obj.at(key);
  if (!v.is_object()) fail(origin, std::string(key) + " must be an object");
  return v;
}

double need_number(const json& obj, const char* key, const std::string& where,
                   const std::string& origin) {
  if (!obj.contains(key)) {
    fail(origin, "missing required field " + where + key);
  }
  const json& v = obj.at(key);
  if (!v.is_number()) fail(origin, where + key + " must be a number");
  return v.get<double>();
}

std::optional<double> opt_number(const json& obj, const char* key,
                                 const std::string& where,
                                 const std::string& origin) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(origin, where + key + " must be a number");
  return v.get<double>();
}

std::optional<int> opt_int(const json& obj, const char* key,
                           const std::string& where,
                           const std::string& origin) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(origin, where + key + " must be an integer");
  return v.get<int>();
}

std::optional<std::string> opt_string(const json& obj, const char* key,
                                      const std::string& where,
                                      const std::string& origin) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(origin, where + key + " must be a string");
  return v.get<std::string>();
}

// ---------------------------------------------------------------------------
// Rendering

struct Table {
  std::vector<std::string> columns;
  std::vector<json> rows;  // objects keyed by column name
};

std::string cell_to_csv(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt_num(v.get<double>());
  return v.dump();
}

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (const json& row : t.rows) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c) out += ',';
      if (row.contains(t.columns[c])) out += cell_to_csv(row.at(t.columns[c]));
    }
    out += '\n';
  }
  return out;
}

void flatten_into(const json& v, const std::string& prefix, Table& t) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      flatten_into(it.value(),
                   prefix.empty() ? it.key() : prefix + "." + it.key(), t);
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      flatten_into(v[i], prefix + "[" + std::to_string(i) + "]", t);
    }
  } else {
    t.rows.push_back(json{{"quantity", prefix}, {"value", v}});
  }
}

ScenarioOutcome object_outcome(const ScenarioConfig& cfg, const json& out,
                               int code) {
  ScenarioOutcome oc;
  oc.exit_code = code;
  oc.format = cfg.format.value_or(OutputFormat::Json);
  if (oc.format == OutputFormat::Json) {
    oc.document = out.dump(2) + "\n";
  } else {
    Table t;
    t.columns = {"quantity", "value"};
    flatten_into(out, "", t);
    oc.document = render_csv(t);
  }
  return oc;
}

ScenarioOutcome table_outcome(const ScenarioConfig& cfg,
                              const std::string& mode, const Table& t,
                              int code) {
  ScenarioOutcome oc;
  oc.exit_code = code;
  oc.format = cfg.format.value_or(OutputFormat::Csv);
  if (oc.format == OutputFormat::Csv) {
    oc.document = render_csv(t);
  } else {
    json doc;
    doc["mode"] = mode;
    doc["columns"] = t.columns;
    doc["rows"] = t.rows;
    oc.document = doc.dump(2) + "\n";
  }
  return oc;
}

json machine_echo(const MachineParams& m) {
  json j{{"E1", m.E1}, {"E2", m.E2}, {"T1", m.T1},
         {"T2", m.T2}, {"g", m.g},   {"p", m.p}};
  if (m.p2) j["p2"] = *m.p2;
  return j;
}

json target_echo(const TargetSpec& spec, const MachineParams& m) {
  const double gap = spec.gap.value_or(m.E2 - m.E1);
  json t;
  switch (spec.kind) {
    case TargetSpec::Kind::Qubit:
      t["kind"] = "qubit";
      t["E3"] = gap;
      if (spec.bath) t["bath"] = json{{"T3", spec.bath->T3}, {"p3", spec.bath->p3}};
      break;
    case TargetSpec::Kind::Ladder:
      t["kind"] = "ladder";
      t["levels"] = spec.levels;
      t["E3"] = gap;
      break;
    case TargetSpec::Kind::Weight:
      t["kind"] = "weight";
      t["Ew"] = gap;
      t["half_width"] = spec.half_width;
      t["n0"] = spec.n0;
      break;
  }
  return t;
}

// Validation-table helper shared by the engine / breakeven / validate modes:
// pass when |sim - pred| <= max(tol_rel |pred|, abs_floor).
struct Checker {
  Table table;
  bool all_pass = true;

  Checker() {
    table.columns = {"quantity", "simulated", "predicted", "abs_err",
                     "rel_err",  "tol_rel",   "status"};
  }

  void add(const std::string& name, double sim, double pred, double tol_rel,
           double abs_floor) {
    const double abs_err = std::abs(sim - pred);
    const double tol = std::max(tol_rel * std::abs(pred), abs_floor);
    const bool ok = abs_err <= tol;
    all_pass = all_pass && ok;
    table.rows.push_back(json{
        {"quantity", name},
        {"simulated", sim},
        {"predicted", pred},
        {"abs_err", abs_err},
        {"rel_err", pred != 0.0 ? json(abs_err / std::abs(pred)) : json()},
        {"tol_rel", tol_rel},
        {"status", ok ? "pass" : "fail"}});
  }

  void add_inconclusive(const std::string& name, double pred, double tol_rel) {
    all_pass = false;
    table.rows.push_back(json{{"quantity", name},
                              {"simulated", json()},
                              {"predicted", pred},
                              {"abs_err", json()},
                              {"rel_err", json()},
                              {"tol_rel", tol_rel},
                              {"status", "inconclusive"}});
  }
};

void throw_on_window_leak(const ObservableTrace& trace) {
  if (trace.edge_flag) {
    throw GuardError(
        "weight window truncation exceeded: max edge population " +
        fmt_num(trace.max_edge_pop) +
        " (enlarge target.half_width or raise integration.edge_threshold)");
  }
}

IntegrationConfig integration_defaults(const ScenarioConfig& cfg,
                                       const Liouvillian& L,
                                       Frame default_frame, double default_t_end,
                                       int default_record_every) {
  IntegrationConfig ic;
  ic.method = cfg.method.value_or(IntegrationMethod::Rk4);
  ic.frame = cfg.frame.value_or(default_frame);
  ic.t_end = cfg.t_end.value_or(default_t_end);
  const double scale = ic.frame == Frame::Lab ? L.lab_rate_scale()
                                              : L.rotating_rate_scale();
  ic.dt = cfg.dt.value_or(0.9 * 0.05 / scale);
  ic.record_every = cfg.record_every.value_or(default_record_every);
  ic.edge_threshold = cfg.edge_threshold.value_or(1e-6);
  return ic;
}

// ---------------------------------------------------------------------------
// Modes

ScenarioOutcome run_classify(const ScenarioConfig& cfg) {
  const MachineParams& m = cfg.machine;
  validate(m);
  const VirtualQubitDescriptor d = describe_virtual_qubit(m);
  const MachineRegime regime = classify_regime(m);

  json out;
  out["mode"] = "classify";
  out["machine"] = machine_echo(m);
  out["regime"] = to_string(regime);
  out["Ev"] = d.Ev;
  out["beta_v"] = d.beta_v;
  const double Tv = virtual_temperature(m);
  out["T_v"] = std::isfinite(Tv) ? json(Tv) : json();
  out["Zeq"] = d.Zeq;
  out["Neq"] = d.Neq;
  out["Zbar_eq"] = equilibrium_antibias(m);
  const auto [rev, eng] = regime_boundaries(m.E1, m.E2, m.T1);
  out["T2_reversible"] = rev;
  out["T2_engine_boundary"] = eng;

  const bool operating = regime == MachineRegime::Refrigerator ||
                         regime == MachineRegime::HeatPump ||
                         regime == MachineRegime::HeatEngine;
  if (operating && (cfg.T3 || regime == MachineRegime::HeatEngine)) {
    try {
      const EfficiencyReport eff = efficiency(m, cfg.T3);
      out["efficiency"] = json{{"eta", eff.eta},
                               {"eta_carnot", eff.eta_carnot},
                               {"correction", eff.correction}};
    } catch (const RegimeError& e) {
      out["efficiency_error"] = e.what();
    }
  }
  return object_outcome(cfg, out, 0);
}

ScenarioOutcome run_stationary(const ScenarioConfig& cfg) {
  const MachineParams& m = cfg.machine;
  validate(m);
  const TargetSpec spec = cfg.target.value_or(TargetSpec{});
  if (spec.kind == TargetSpec::Kind::Weight) {
    throw ConfigError("stationary mode needs a finite target (qubit or ladder)");
  }
  const TargetSystem t = materialize(spec, m);
  const Liouvillian L = Liouvillian::assemble(m, t);

  json out;
  out["mode"] = "stationary";
  out["machine"] = machine_echo(m);
  out["target"] = target_echo(spec, m);

  int code = 0;
  try {
    const StationaryResult st = stationary_state(L);
    out["residual"] = st.residual;
    out["nullspace_dim"] = st.nullspace_dim;
    const TraceSample s = measure(L, st.state, 0.0);
    out["observables"] = json{{"Zv", s.Zv},         {"Nv", s.Nv},
                              {"Zbar_v", s.Zbar},   {"Gamma1", s.Gamma1},
                              {"Gamma2", s.Gamma2}, {"dQ1", s.dQ1},
                              {"dQ2", s.dQ2},       {"dQ3", s.dQ3}};
    const auto& lay = L.layout();
    std::vector<double> pops(lay.target_dim(), 0.0);
    for (int q1 = 0; q1 < 2; ++q1)
      for (int q2 = 0; q2 < 2; ++q2)
        for (int k = 0; k < lay.target_dim(); ++k) {
          pops[k] += st.state(lay.index(q1, q2, k), lay.index(q1, q2, k)).real();
        }
    out["target_populations"] = pops;
    json temp_est;
    if (pops.size() >= 2 && pops[0] > 0.0 && pops[1] > 0.0 && pops[0] != pops[1]) {
      const double est = lay.target_spacing() / std::log(pops[0] / pops[1]);
      if (std::isfinite(est)) temp_est = est;
    }
    out["target_temperature_estimate"] = temp_est;
    const QubitTarget* q = lay.qubit();
    if (!q || !q->bath) {
      out["predicted_trace_distance"] =
          trace_distance(st.state, predicted_stationary(m, t));
    }
  } catch (const AmbiguousStationaryError& e) {
    out["error"] = e.what();
    out["nullspace_dim"] = e.result.nullspace_dim;
    code = 1;
  }
  return object_outcome(cfg, out, code);
}

ScenarioOutcome run_evolve(const ScenarioConfig& cfg) {
  const MachineParams& m = cfg.machine;
  validate(m);
  const TargetSpec spec = cfg.target.value_or(TargetSpec{});
  const TargetSystem t = materialize(spec, m);
  const Liouvillian L = Liouvillian::assemble(m, t);
  if (!cfg.t_end) throw ConfigError("evolve mode needs integration.t_end");
  const IntegrationConfig ic =
      integration_defaults(cfg, L, Frame::Lab, *cfg.t_end, 1);

  const ObservableTrace trace = evolve(L, default_initial_state(L.layout()), ic);
  throw_on_window_leak(trace);

  Table tb;
  tb.columns = {"t",      "energy_mean", "energy_sq", "energy_var",
                "Zv",     "Nv",          "Zbar_v",    "Gamma1",
                "Gamma2", "Delta_im",    "dQ1",       "dQ2",
                "dQ3",    "edge_lo",     "edge_hi",   "trace_err"};
  for (const TraceSample& s : trace.samples) {
    tb.rows.push_back(json{{"t", s.t},
                           {"energy_mean", s.energy_mean},
                           {"energy_sq", s.energy_sq},
                           {"energy_var", s.energy_var},
                           {"Zv", s.Zv},
                           {"Nv", s.Nv},
                           {"Zbar_v", s.Zbar},
                           {"Gamma1", s.Gamma1},
                           {"Gamma2", s.Gamma2},
                           {"Delta_im", s.Delta.imag()},
                           {"dQ1", s.dQ1},
                           {"dQ2", s.dQ2},
                           {"dQ3", s.dQ3},
                           {"edge_lo", s.edge_lo},
                           {"edge_hi", s.edge_hi},
                           {"trace_err", s.trace_err}});
  }
  return table_outcome(cfg, "evolve", tb, 0);
}

ScenarioOutcome run_sweep(const ScenarioConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep mode needs a sweep specification");
  const SweepSpec& sw = *cfg.sweep;
  const std::vector<double> grid = sweep_grid(sw, cfg.machine);
  const bool rates = cfg.machine.equal_reset_rates();

  Table tb;
  tb.columns = {sw.param, "regime", "beta_v", "T_v", "Zeq", "Neq", "Zbar_eq"};
  if (rates) {
    for (const char* c : {"lift_rate", "spread_rate", "dQ1", "dQ2",
                          "weak_coupling_advisory"}) {
      tb.columns.push_back(c);
    }
  }
  for (const double v : grid) {
    MachineParams mi = cfg.machine;
    if (sw.param == "E1") mi.E1 = v;
    else if (sw.param == "E2") mi.E2 = v;
    else if (sw.param == "T1") mi.T1 = v;
    else if (sw.param == "T2") mi.T2 = v;
    else if (sw.param == "g") mi.g = v;
    else if (sw.param == "p") mi.p = v;
    else throw ConfigError("sweep.param must be one of E1, E2, T1, T2, g, p");
    validate(mi);
    const VirtualQubitDescriptor d = describe_virtual_qubit(mi);
    const double Tv = virtual_temperature(mi);
    json row{{sw.param, v},
             {"regime", to_string(classify_regime(mi))},
             {"beta_v", d.beta_v},
             {"T_v", std::isfinite(Tv) ? json(Tv) : json()},
             {"Zeq", d.Zeq},
             {"Neq", d.Neq},
             {"Zbar_eq", equilibrium_antibias(mi)}};
    if (rates) {
      // Closed-form rates for a weight whose spacing is the virtual gap.
      const AsymptoticSolution sol = asymptotic_solution(mi, mi.E2 - mi.E1);
      row["lift_rate"] = sol.lift_rate;
      row["spread_rate"] = sol.spread_rate;
      row["dQ1"] = sol.dQ1;
      row["dQ2"] = sol.dQ2;
      row["weak_coupling_advisory"] = sol.weak_coupling_advisory;
    }
    tb.rows.push_back(std::move(row));
  }
  return table_outcome(cfg, "sweep", tb, 0);
}

ScenarioOutcome run_engine(const ScenarioConfig& cfg) {
  const MachineParams& m = cfg.machine;
  validate(m);
  TargetSpec spec;
  spec.kind = TargetSpec::Kind::Weight;
  if (cfg.target) spec = *cfg.target;
  if (spec.kind != TargetSpec::Kind::Weight) {
    throw ConfigError("engine mode needs a weight target");
  }
  const TargetSystem t = materialize(spec, m);
  const WeightTarget& w = std::get<WeightTarget>(t);
  const AsymptoticSolution sol = asymptotic_solution(m, w.Ew);
  if (sol.weak_coupling_advisory) {
    throw GuardError(
        "machine is outside the weak-coupling domain (g or a reset rate is "
        "not small against E1); the closed-form rate targets do not apply");
  }
  const RateConstants rc = rate_constants(m);
  const Liouvillian L = Liouvillian::assemble(m, t);
  const IntegrationConfig ic =
      integration_defaults(cfg, L, Frame::Rotating, 5.0 / rc.alpha, 2);

  const ObservableTrace trace = evolve(L, default_initial_state(L.layout()), ic);
  throw_on_window_leak(trace);
  const double t_from = ic.t_end / 2.0;

  const double lift_sim =
      tail_fit(trace, t_from, sample_selector("energy_mean")).slope;
  const double spread_sim =
      tail_fit(trace, t_from, sample_selector("energy_var")).slope;
  const double dq1_sim = tail_mean(trace, t_from, sample_selector("dQ1"));
  const double dq2_sim = tail_mean(trace, t_from, sample_selector("dQ2"));

  Checker ck;
  const double rate_floor = 1e-6 * w.Ew * rc.alpha;
  ck.add("lift_rate", lift_sim, sol.lift_rate, 0.02, rate_floor);
  ck.add("spread_rate", spread_sim, sol.spread_rate, 0.05, rate_floor);
  ck.add("dQ1", dq1_sim, sol.dQ1, 0.02, rate_floor);
  ck.add("dQ2", dq2_sim, sol.dQ2, 0.02, rate_floor);
  // First law for the asymptotic run: all absorbed heat goes into the lift.
  ck.add("heat_lift_balance", dq1_sim + dq2_sim - lift_sim, 0.0, 0.0, 1e-6);
  ck.add("Zv", tail_mean(trace, t_from, sample_selector("Zv")), sol.Zv_S, 0.01,
         1e-9);
  ck.add("Nv", tail_mean(trace, t_from, sample_selector("Nv")), sol.Nv_S, 0.01,
         1e-9);
  ck.add("Zbar_v", tail_mean(trace, t_from, sample_selector("Zbar_v")),
         sol.Zbar_S, 0.01, 1e-9);
  ck.add("Gamma1", tail_mean(trace, t_from, sample_selector("Gamma1")),
         sol.Gamma1_S, 0.01, 1e-9);
  ck.add("Gamma2", tail_mean(trace, t_from, sample_selector("Gamma2")),
         sol.Gamma2_S, 0.01, 1e-9);

  return table_outcome(cfg, "engine", ck.table, ck.all_pass ? 0 : 1);
}

ScenarioOutcome run_breakeven(const ScenarioConfig& cfg) {
  const MachineParams& m = cfg.machine;
  validate(m);
  TargetSpec spec;
  spec.kind = TargetSpec::Kind::Weight;
  if (cfg.target) spec = *cfg.target;
  if (spec.kind != TargetSpec::Kind::Weight) {
    throw ConfigError("breakeven mode needs a weight target");
  }
  const TargetSystem t = materialize(spec, m);
  const WeightTarget& w = std::get<WeightTarget>(t);
  const VirtualQubitDescriptor d = describe_virtual_qubit(m);
  if (d.Zeq == 0.0) {
    throw RegimeError(
        "break-even is undefined at zero equilibrium bias (the mean weight "
        "energy does not drift)");
  }
  const BreakEvenPoint bp = break_even(m, w.Ew);
  const Liouvillian L = Liouvillian::assemble(m, t);
  const IntegrationConfig ic =
      integration_defaults(cfg, L, Frame::Rotating, 1.3 * bp.time, 4);

  const ObservableTrace trace = evolve(L, default_initial_state(L.layout()), ic);
  throw_on_window_leak(trace);

  // First sample where the mean displacement has caught up with one standard
  // deviation, after the spread has initially outrun the drift.
  const auto& ss = trace.samples;
  const double e0 = ss.front().energy_mean;
  const auto gap = [&](const TraceSample& s) {
    return std::abs(s.energy_mean - e0) -
           std::sqrt(std::max(s.energy_var, 0.0));
  };
  bool seen_negative = false;
  bool found = false;
  double t_cross = 0.0, e_cross = 0.0;
  for (std::size_t i = 1; i < ss.size(); ++i) {
    const double f = gap(ss[i]);
    if (!seen_negative) {
      if (f < 0.0) seen_negative = true;
      continue;
    }
    if (f >= 0.0) {
      const double fa = gap(ss[i - 1]);
      const double u = f == fa ? 0.0 : (0.0 - fa) / (f - fa);
      t_cross = ss[i - 1].t + u * (ss[i].t - ss[i - 1].t);
      e_cross = (ss[i - 1].energy_mean - e0) +
                u * (ss[i].energy_mean - ss[i - 1].energy_mean);
      found = true;
      break;
    }
  }

  Checker ck;
  if (found) {
    ck.add("break_even_time", t_cross, bp.time, 0.05, 0.0);
    ck.add("break_even_energy", e_cross, bp.energy, 0.05, 0.0);
  } else {
    ck.add_inconclusive("break_even_time", bp.time, 0.05);
    ck.add_inconclusive("break_even_energy", bp.energy, 0.05);
  }
  const double coth = 1.0 / std::tanh(0.5 * d.Ev * d.beta_v);
  ck.add("bias_norm_identity", d.Neq / d.Zeq, coth, 0.0,
         1e-12 * std::max(1.0, std::abs(coth)));

  return table_outcome(cfg, "breakeven", ck.table, ck.all_pass ? 0 : 1);
}

ScenarioOutcome run_validate(const ScenarioConfig& cfg) {
  const MachineParams& m = cfg.machine;
  validate(m);
  const VirtualQubitDescriptor d = describe_virtual_qubit(m);
  Checker ck;

  ck.add("bias_norm_identity", d.Neq * std::tanh(0.5 * d.Ev * d.beta_v), d.Zeq,
         0.0, 1e-12 * std::max(1.0, std::abs(d.Zeq)));
  ck.add("entropy_balance_residual",
         entropy_equality_residual(m.E1, m.E2, m.T1, m.T2, 1.0), 0.0, 0.0,
         1e-12 * std::max(1.0, m.E2 / m.T2 + m.E1 / m.T1));

  const TargetSystem t = TargetSystem{resonant_qubit(m)};
  const Liouvillian L = Liouvillian::assemble(m, t);
  const StationaryResult st = stationary_state(L);
  ck.add("stationary_vs_predicted",
         trace_distance(st.state, predicted_stationary(m, t)), 0.0, 0.0, 1e-8);
  ck.add("stationary_residual", st.residual, 0.0, 0.0,
         1e-9 * (1.0 + L.lab_rate_scale()));

  const MachineRegime regime = classify_regime(m);
  const double Tv = virtual_temperature(m);
  bool consistent = false;
  switch (regime) {
    case MachineRegime::Refrigerator:
      consistent = Tv > 0.0 && Tv < std::min(m.T1, m.T2);
      break;
    case MachineRegime::HeatPump:
      consistent = std::isfinite(Tv) && Tv > std::max(m.T1, m.T2);
      break;
    case MachineRegime::HeatEngine:
      consistent = d.beta_v < 0.0;
      break;
    case MachineRegime::ReversibleBoundary:
      consistent = m.T1 == m.T2;
      break;
    case MachineRegime::EngineBoundary:
      consistent = d.beta_v == 0.0;
      break;
  }
  ck.add("regime_consistency", consistent ? 1.0 : 0.0, 1.0, 0.0, 0.5);

  if (regime == MachineRegime::HeatEngine ||
      ((regime == MachineRegime::Refrigerator ||
        regime == MachineRegime::HeatPump) &&
       cfg.T3)) {
    try {
      const EfficiencyReport eff = efficiency(
          m, regime == MachineRegime::HeatEngine ? std::nullopt : cfg.T3);
      ck.add("efficiency_factorization",
             eff.eta - eff.eta_carnot * eff.correction, 0.0, 0.0, 1e-12);
    } catch (const RegimeError&) {
      // T3 outside the machine's reach; the factorization has no referent.
    }
  }

  return table_outcome(cfg, "validate", ck.table, ck.all_pass ? 0 : 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// Public surface

ScenarioMode parse_mode(const std::string& name) {
  if (name == "classify") return ScenarioMode::Classify;
  if (name == "stationary") return ScenarioMode::Stationary;
  if (name == "evolve") return ScenarioMode::Evolve;
  if (name == "sweep") return ScenarioMode::Sweep;
  if (name == "engine") return ScenarioMode::Engine;
  if (name == "breakeven") return ScenarioMode::Breakeven;
  if (name == "validate") return ScenarioMode::Validate;
  throw ConfigError("unknown mode: " + name);
}

std::string to_string(ScenarioMode m) {
  switch (m) {
    case ScenarioMode::Classify: return "classify";
    case ScenarioMode::Stationary: return "stationary";
    case ScenarioMode::Evolve: return "evolve";
    case ScenarioMode::Sweep: return "sweep";
    case ScenarioMode::Engine: return "engine";
    case ScenarioMode::Breakeven: return "breakeven";
    case ScenarioMode::Validate: return "validate";
  }
  return "unknown";
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format: " + name + " (use csv or json)");
}

std::string to_string(OutputFormat f) {
  return f == OutputFormat::Csv ? "csv" : "json";
}

TargetSystem materialize(const TargetSpec& spec, const MachineParams& m) {
  const double gap = spec.gap.value_or(m.E2 - m.E1);
  switch (spec.kind) {
    case TargetSpec::Kind::Qubit: {
      QubitTarget q;
      q.E3 = gap;
      q.bath = spec.bath;
      return q;
    }
    case TargetSpec::Kind::Ladder: {
      LadderTarget l;
      l.levels = spec.levels;
      l.E3 = gap;
      return l;
    }
    case TargetSpec::Kind::Weight: {
      WeightTarget w;
      w.Ew = gap;
      w.n0 = spec.n0;
      w.n_min = spec.n0 - spec.half_width;
      w.n_max = spec.n0 + spec.half_width;
      return w;
    }
  }
  throw ConfigError("unrecognized target kind");
}

std::vector<double> sweep_grid(const SweepSpec& spec, const MachineParams& m) {
  if (spec.steps < 2) throw ConfigError("sweep.steps must be >= 2");
  if (!std::isfinite(spec.from) || !std::isfinite(spec.to)) {
    throw ConfigError("sweep range must be finite");
  }
  if (!(spec.from < spec.to)) {
    throw ConfigError("sweep.from must be less than sweep.to");
  }
  std::vector<double> grid(spec.steps);
  const double h = (spec.to - spec.from) / (spec.steps - 1);
  for (int i = 0; i < spec.steps; ++i) grid[i] = spec.from + i * h;
  grid.front() = spec.from;
  grid.back() = spec.to;
  if (spec.param == "T2") {
    const auto [rev, eng] = regime_boundaries(m.E1, m.E2, m.T1);
    for (const double b : {rev, eng}) {
      if (b > spec.from && b < spec.to) grid.push_back(b);
    }
  } else if (spec.param == "T1") {
    for (const double b : {m.T2, (m.E1 / m.E2) * m.T2}) {
      if (b > spec.from && b < spec.to) grid.push_back(b);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

ScenarioConfig parse_config_json(const std::string& text,
                                 const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(origin, "top level must be an object");
  reject_unknown(doc,
                 {"mode", "machine", "target", "T3", "integration", "sweep",
                  "output"},
                 "", origin);

  ScenarioConfig cfg;
  if (auto s = opt_string(doc, "mode", "", origin)) {
    try {
      cfg.mode = parse_mode(*s);
    } catch (const ConfigError& e) {
      fail(origin, e.what());
    }
  }

  const json& mj = need_object(doc, "machine", origin);
  reject_unknown(mj, {"E1", "E2", "T1", "T2", "g", "p", "p2"}, "machine.",
                 origin);
  cfg.machine.E1 = need_number(mj, "E1", "machine.", origin);
  cfg.machine.E2 = need_number(mj, "E2", "machine.", origin);
  cfg.machine.T1 = need_number(mj, "T1", "machine.", origin);
  cfg.machine.T2 = need_number(mj, "T2", "machine.", origin);
  cfg.machine.g = opt_number(mj, "g", "machine.", origin).value_or(0.01);
  cfg.machine.p = opt_number(mj, "p", "machine.", origin).value_or(0.01);
  cfg.machine.p2 = opt_number(mj, "p2", "machine.", origin);

  if (doc.contains("target")) {
    const json& tj = doc.at("target");
    if (!tj.is_object()) fail(origin, "target must be an object");
    const auto kind = opt_string(tj, "kind", "target.", origin);
    if (!kind) fail(origin, "missing required field target.kind");
    TargetSpec spec;
    if (*kind == "qubit") {
      spec.kind = TargetSpec::Kind::Qubit;
      reject_unknown(tj, {"kind", "E3", "bath"}, "target.", origin);
      spec.gap = opt_number(tj, "E3", "target.", origin);
      if (tj.contains("bath")) {
        const json& bj = tj.at("bath");
        if (!bj.is_object()) fail(origin, "target.bath must be an object");
        reject_unknown(bj, {"T3", "p3"}, "target.bath.", origin);
        QubitTarget::Bath bath;
        bath.T3 = need_number(bj, "T3", "target.bath.", origin);
        bath.p3 = opt_number(bj, "p3", "target.bath.", origin).value_or(0.01);
        spec.bath = bath;
      }
    } else if (*kind == "ladder") {
      spec.kind = TargetSpec::Kind::Ladder;
      reject_unknown(tj, {"kind", "levels", "E3"}, "target.", origin);
      const auto levels = opt_int(tj, "levels", "target.", origin);
      if (!levels) fail(origin, "missing required field target.levels");
      spec.levels = *levels;
      spec.gap = opt_number(tj, "E3", "target.", origin);
    } else if (*kind == "weight") {
      spec.kind = TargetSpec::Kind::Weight;
      reject_unknown(tj, {"kind", "Ew", "half_width", "n0"}, "target.", origin);
      spec.gap = opt_number(tj, "Ew", "target.", origin);
      if (auto hw = opt_int(tj, "half_width", "target.", origin)) {
        spec.half_width = *hw;
      }
      if (auto n0 = opt_int(tj, "n0", "target.", origin)) spec.n0 = *n0;
    } else {
      fail(origin, "target.kind must be qubit, ladder or weight");
    }
    cfg.target = spec;
  }

  if (doc.contains("T3")) cfg.T3 = need_number(doc, "T3", "", origin);

  if (doc.contains("integration")) {
    const json& ij = doc.at("integration");
    if (!ij.is_object()) fail(origin, "integration must be an object");
    reject_unknown(ij,
                   {"t_end", "dt", "record_every", "method", "frame",
                    "edge_threshold"},
                   "integration.", origin);
    cfg.t_end = opt_number(ij, "t_end", "integration.", origin);
    cfg.dt = opt_number(ij, "dt", "integration.", origin);
    cfg.record_every = opt_int(ij, "record_every", "integration.", origin);
    if (auto s = opt_string(ij, "method", "integration.", origin)) {
      if (*s == "rk4") cfg.method = IntegrationMethod::Rk4;
      else if (*s == "expm") cfg.method = IntegrationMethod::Expm;
      else fail(origin, "integration.method must be rk4 or expm");
    }
    if (auto s = opt_string(ij, "frame", "integration.", origin)) {
      if (*s == "lab") cfg.frame = Frame::Lab;
      else if (*s == "rotating") cfg.frame = Frame::Rotating;
      else fail(origin, "integration.frame must be lab or rotating");
    }
    cfg.edge_threshold = opt_number(ij, "edge_threshold", "integration.", origin);
    if (cfg.edge_threshold && !(*cfg.edge_threshold > 0.0)) {
      fail(origin, "integration.edge_threshold must be > 0");
    }
  }

  if (doc.contains("sweep")) {
    const json& sj = doc.at("sweep");
    if (!sj.is_object()) fail(origin, "sweep must be an object");
    reject_unknown(sj, {"param", "from", "to", "steps"}, "sweep.", origin);
    SweepSpec sw;
    const auto param = opt_string(sj, "param", "sweep.", origin);
    if (!param) fail(origin, "missing required field sweep.param");
    static const std::vector<std::string> kParams{"E1", "E2", "T1",
                                                  "T2", "g",  "p"};
    if (std::find(kParams.begin(), kParams.end(), *param) == kParams.end()) {
      fail(origin, "sweep.param must be one of E1, E2, T1, T2, g, p");
    }
    sw.param = *param;
    sw.from = need_number(sj, "from", "sweep.", origin);
    sw.to = need_number(sj, "to", "sweep.", origin);
    const auto steps = opt_int(sj, "steps", "sweep.", origin);
    if (!steps) fail(origin, "missing required field sweep.steps");
    sw.steps = *steps;
    cfg.sweep = sw;
  }

  if (doc.contains("output")) {
    const json& oj = doc.at("output");
    if (!oj.is_object()) fail(origin, "output must be an object");
    reject_unknown(oj, {"path", "format"}, "output.", origin);
    cfg.out_path = opt_string(oj, "path", "output.", origin);
    if (cfg.out_path && cfg.out_path->empty()) {
      fail(origin, "output.path must not be empty");
    }
    if (auto s = opt_string(oj, "format", "output.", origin)) {
      try {
        cfg.format = parse_format(*s);
      } catch (const ConfigError& e) {
        fail(origin, e.what());
      }
    }
  }
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(path + ": cannot read file");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_json(buf.str(), path);
}

ScenarioOutcome run_scenario(const ScenarioConfig& cfg) {
  switch (cfg.mode) {
    case ScenarioMode::Classify: return run_classify(cfg);
    case ScenarioMode::Stationary: return run_stationary(cfg);
    case ScenarioMode::Evolve: return run_evolve(cfg);
    case ScenarioMode::Sweep: return run_sweep(cfg);
    case ScenarioMode::Engine: return run_engine(cfg);
    case ScenarioMode::Breakeven: return run_breakeven(cfg);
    case ScenarioMode::Validate: return run_validate(cfg);
  }
  throw ConfigError("unrecognized scenario mode");
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp(target);
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    throw Error("failed to move " + tmp.string() + " into place: " +
                ec.message());
  }
}

}  // namespace vqtherm

#include "vqtherm/analytics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace vqtherm {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + " must be positive and finite");
  }
}

// The swap coupling only moves resonant quanta, so every per-quantum energy
// bookkeeping below assumes the target gap equals the virtual gap.
void require_resonant_gap(double E1, double E2, double E3) {
  const double Ev = E2 - E1;
  if (std::abs(E3 - Ev) > 1e-12 * std::max(1.0, std::abs(Ev))) {
    throw ConfigError("target gap E3 must equal the virtual gap E2 - E1");
  }
}

}  // namespace

RateConstants rate_constants(double g, double p) {
  require_positive(g, "machine.g");
  require_positive(p, "machine.p");
  const double g2 = g * g;
  const double d = 2.0 * g2 + p * p;
  RateConstants rc;
  rc.alpha = g2 * p / d;
  rc.beta = 2.0 * g2 * g2 * p * (g2 + 2.0 * p * p) / (d * d * d);
  return rc;
}

RateConstants rate_constants(const MachineParams& m) {
  validate(m);
  if (!m.equal_reset_rates()) {
    throw ConfigError("closed-form rates require equal reset rates (p2 == p)");
  }
  return rate_constants(m.g, m.p);
}

AsymptoticSolution asymptotic_solution(const MachineParams& m, double Ew) {
  require_positive(Ew, "weight spacing Ew");
  const RateConstants rc = rate_constants(m);  // validates m and p2 == p
  const double g = m.g, p = m.p;
  const double d = 2.0 * g * g + p * p;
  const double Zeq = equilibrium_bias(m);
  const double Neq = equilibrium_norm(m);

  AsymptoticSolution s;
  s.Delta_S = Complex(0.0, -g * p * Zeq / d);
  s.Zv_S = p * p * Zeq / d;
  s.Nv_S = Neq - g * g * Zeq * Zeq / d;
  s.Zbar_S = equilibrium_antibias(m);
  s.Gamma1_S = thermal_qubit_state(m.E1, m.T1)(0, 0).real() + g * g * Zeq / d;
  s.Gamma2_S = thermal_qubit_state(m.E2, m.T2)(0, 0).real() - g * g * Zeq / d;
  s.lift_rate = -rc.alpha * Ew * Zeq;
  s.spread_rate = Ew * Ew * (rc.alpha * Neq - rc.beta * Zeq * Zeq);
  s.dQ1 = rc.alpha * m.E1 * Zeq;
  s.dQ2 = -rc.alpha * m.E2 * Zeq;
  s.weak_coupling_advisory = m.weak_coupling_advisory();
  return s;
}

BreakEvenPoint break_even(const MachineParams& m, double Ew) {
  const AsymptoticSolution s = asymptotic_solution(m, Ew);
  BreakEvenPoint bp;
  if (s.lift_rate == 0.0) {
    bp.time = std::numeric_limits<double>::infinity();
    bp.energy = std::numeric_limits<double>::infinity();
    return bp;
  }
  bp.time = s.spread_rate / (s.lift_rate * s.lift_rate);
  bp.energy = s.lift_rate * bp.time;
  return bp;
}

EfficiencyReport efficiency(MachineRegime kind, double E1, double E2, double E3,
                            double T1, double T2, std::optional<double> T3) {
  require_positive(E1, "E1");
  if (!(E2 > E1)) throw ConfigError("E2 must exceed E1");
  require_positive(T1, "T1");
  require_positive(T2, "T2");
  require_resonant_gap(E1, E2, E3);
  const double b1 = 1.0 / T1, b2 = 1.0 / T2;
  const double Ev = E2 - E1;

  EfficiencyReport r;
  r.kind = kind;
  switch (kind) {
    case MachineRegime::Refrigerator: {
      if (!T3) {
        throw ConfigError(
            "refrigerator efficiency needs the target temperature T3");
      }
      require_positive(*T3, "T3");
      const double b3 = 1.0 / *T3;
      if (!(b2 > b1) || !(b3 > b2)) {
        throw RegimeError(
            "refrigeration needs T3 < T2 < T1 (fuel bath 1 hottest)");
      }
      r.eta = E3 / E1;
      r.eta_carnot = (b2 - b1) / (b3 - b2);
      // (beta_v - b2) written as E1 (b2 - b1) / Ev to avoid cancellation.
      r.correction = (b3 - b2) * Ev / (E1 * (b2 - b1));
      break;
    }
    case MachineRegime::HeatPump: {
      if (!T3) {
        throw ConfigError("heat-pump efficiency needs the target temperature T3");
      }
      require_positive(*T3, "T3");
      const double b3 = 1.0 / *T3;
      if (!(b1 > b2) || !(b1 > b3)) {
        throw RegimeError("heat pumping needs T2 > T1 and T3 > T1");
      }
      r.eta = E3 / E2;
      r.eta_carnot = (b1 - b2) / (b1 - b3);
      // (b1 - beta_v) written as E2 (b1 - b2) / Ev to avoid cancellation.
      r.correction = (b1 - b3) * Ev / (E2 * (b1 - b2));
      break;
    }
    case MachineRegime::HeatEngine: {
      if (T3) {
        throw ConfigError(
            "a heat engine's target is a work repository; it takes no T3");
      }
      if (!(b1 > b2)) throw RegimeError("work extraction needs T2 > T1");
      r.eta = 1.0 - E1 / E2;
      r.eta_carnot = 1.0 - T1 / T2;
      r.correction = b1 * Ev / (E2 * (b1 - b2));
      break;
    }
    default:
      throw RegimeError("efficiency is defined away from the regime boundaries");
  }
  return r;
}

EfficiencyReport efficiency(const MachineParams& m, std::optional<double> T3) {
  validate(m);
  const MachineRegime r = classify_regime(m);
  if (r == MachineRegime::EngineBoundary ||
      r == MachineRegime::ReversibleBoundary) {
    throw RegimeError("machine sits on a regime boundary; efficiency is undefined");
  }
  return efficiency(r, m.E1, m.E2, m.E2 - m.E1, m.T1, m.T2, T3);
}

EntropyRates entropy_rates(MachineRegime kind, double Q3, double beta_v,
                           std::optional<double> beta3) {
  if (!std::isfinite(Q3) || !std::isfinite(beta_v)) {
    throw ConfigError("entropy rates need finite Q3 and beta_v");
  }
  EntropyRates e;
  e.S_flow_v = Q3 * beta_v;
  switch (kind) {
    case MachineRegime::Refrigerator:
      if (!beta3) throw ConfigError("refrigerator entropy balance needs beta3");
      e.Delta_S = Q3 * (beta_v - *beta3);
      break;
    case MachineRegime::HeatPump:
      if (!beta3) throw ConfigError("heat-pump entropy balance needs beta3");
      e.Delta_S = Q3 * (*beta3 - beta_v);
      break;
    case MachineRegime::HeatEngine:
      if (beta3) {
        throw ConfigError("a heat engine's work flux carries no target temperature");
      }
      e.Delta_S = -Q3 * beta_v;
      break;
    default:
      throw RegimeError("entropy rates are defined away from the regime boundaries");
  }
  return e;
}

double entropy_equality_residual(double E1, double E2, double T1, double T2,
                                 double q) {
  require_positive(E1, "E1");
  if (!(E2 > E1)) throw ConfigError("E2 must exceed E1");
  require_positive(T1, "T1");
  require_positive(T2, "T2");
  const double bv = virtual_beta(E1, E2, T1, T2);
  return q * (E2 / T2 - E1 / T1 - (E2 - E1) * bv);
}

}  // namespace vqtherm

#include "vqtherm/machine.hpp"

#include <cmath>
#include <limits>

namespace vqtherm {

namespace {

// e^{-a} - e^{-b} without cancellation when a ~ b (a = E1/T1, b = E2/T2).
double exp_difference(double a, double b) {
  if (a >= b) return std::exp(-b) * std::expm1(b - a);
  return -std::exp(-a) * std::expm1(a - b);
}

}  // namespace

bool MachineParams::weak_coupling_advisory() const {
  return g >= E1 / 10.0 || std::max(p, p2_or_p()) >= E1 / 10.0;
}

void validate(const MachineParams& m) {
  if (!(m.E1 > 0.0)) throw ConfigError("machine.E1 must be > 0");
  if (!(m.E2 > m.E1)) {
    if (m.E2 == m.E1) throw ConfigError("machine.E2 == E1: zero virtual gap");
    throw ConfigError("machine.E2 must be > E1");
  }
  if (!(m.T1 > 0.0)) throw ConfigError("machine.T1 must be > 0");
  if (!(m.T2 > 0.0)) throw ConfigError("machine.T2 must be > 0");
  if (!(m.g > 0.0)) throw ConfigError("machine.g must be > 0");
  if (!(m.p > 0.0)) throw ConfigError("machine.p must be > 0");
  if (m.p2 && !(*m.p2 > 0.0)) throw ConfigError("machine.p2 must be > 0");
  if (!std::isfinite(m.E1) || !std::isfinite(m.E2) || !std::isfinite(m.T1) ||
      !std::isfinite(m.T2) || !std::isfinite(m.g) || !std::isfinite(m.p)) {
    throw ConfigError("machine parameters must be finite");
  }
}

double virtual_beta(double E1, double E2, double T1, double T2) {
  if (E2 == E1) throw ConfigError("E2 == E1: zero virtual gap");
  return (E2 / T2 - E1 / T1) / (E2 - E1);
}

double virtual_beta(const MachineParams& m) {
  validate(m);
  return virtual_beta(m.E1, m.E2, m.T1, m.T2);
}

double virtual_temperature(double E1, double E2, double T1, double T2) {
  const double bv = virtual_beta(E1, E2, T1, T2);
  if (bv == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / bv;
}

double virtual_temperature(const MachineParams& m) {
  validate(m);
  return virtual_temperature(m.E1, m.E2, m.T1, m.T2);
}

Eigen::Matrix2cd thermal_qubit_state_beta(double E, double beta) {
  if (!(E > 0.0)) throw ConfigError("thermal qubit state requires E > 0");
  const double x = E * beta;
  double ground;
  double excited;
  if (x >= 0.0) {
    const double w = std::exp(-x);
    ground = 1.0 / (1.0 + w);
    excited = w / (1.0 + w);
  } else {  // inverted: evaluate via exp(x) <= 1 to avoid overflow
    const double w = std::exp(x);
    ground = w / (1.0 + w);
    excited = 1.0 / (1.0 + w);
  }
  Eigen::Matrix2cd tau = Eigen::Matrix2cd::Zero();
  tau(0, 0) = ground;
  tau(1, 1) = excited;
  return tau;
}

Eigen::Matrix2cd thermal_qubit_state(double E, double T) {
  // 1/T maps T = 0+ -> beta = +inf (ground state) and T = +-inf -> beta = 0.
  return thermal_qubit_state_beta(E, 1.0 / T);
}

Eigen::VectorXd thermal_ladder_populations(int levels, double E, double beta) {
  if (levels < 2) throw ConfigError("ladder needs at least 2 levels");
  if (!(E > 0.0)) throw ConfigError("ladder spacing must be > 0");
  const double x = beta * E;
  // Shift exponents so the largest weight is e^0 = 1 before normalizing.
  const double shift = x >= 0.0 ? 0.0 : -x * (levels - 1);
  Eigen::VectorXd w(levels);
  for (int n = 0; n < levels; ++n) w[n] = std::exp(-x * n - shift);
  return w / w.sum();
}

double equilibrium_bias(const MachineParams& m) {
  validate(m);
  const double a = m.E1 / m.T1;
  const double b = m.E2 / m.T2;
  return exp_difference(a, b) / ((1.0 + std::exp(-a)) * (1.0 + std::exp(-b)));
}

double equilibrium_norm(const MachineParams& m) {
  validate(m);
  const double a = m.E1 / m.T1;
  const double b = m.E2 / m.T2;
  return (std::exp(-a) + std::exp(-b)) /
         ((1.0 + std::exp(-a)) * (1.0 + std::exp(-b)));
}

double equilibrium_antibias(const MachineParams& m) {
  validate(m);
  const double a = m.E1 / m.T1;
  const double b = m.E2 / m.T2;
  return (1.0 - std::exp(-a) * std::exp(-b)) /
         ((1.0 + std::exp(-a)) * (1.0 + std::exp(-b)));
}

VirtualQubitDescriptor describe_virtual_qubit(const MachineParams& m) {
  validate(m);
  return VirtualQubitDescriptor{
      .Ev = m.E2 - m.E1,
      .beta_v = virtual_beta(m.E1, m.E2, m.T1, m.T2),
      .Zeq = equilibrium_bias(m),
      .Neq = equilibrium_norm(m),
  };
}

std::string to_string(MachineRegime r) {
  switch (r) {
    case MachineRegime::Refrigerator: return "Refrigerator";
    case MachineRegime::HeatPump: return "HeatPump";
    case MachineRegime::HeatEngine: return "HeatEngine";
    case MachineRegime::ReversibleBoundary: return "ReversibleBoundary";
    case MachineRegime::EngineBoundary: return "EngineBoundary";
  }
  return "?";
}

MachineRegime classify_regime(const MachineParams& m) {
  const double bv = virtual_beta(m);
  if (bv == 0.0) return MachineRegime::EngineBoundary;
  if (bv < 0.0) return MachineRegime::HeatEngine;
  if (m.T1 == m.T2) return MachineRegime::ReversibleBoundary;
  // For T1 != T2 the virtual temperature is strictly outside [min, max],
  // so beta_v is strictly outside [1/max(T1,T2), 1/min(T1,T2)].
  if (bv > std::max(1.0 / m.T1, 1.0 / m.T2)) return MachineRegime::Refrigerator;
  return MachineRegime::HeatPump;
}

std::pair<double, double> regime_boundaries(double E1, double E2, double T1) {
  if (!(E1 > 0.0) || !(E2 > E1)) throw ConfigError("need E2 > E1 > 0");
  if (!(T1 > 0.0)) throw ConfigError("need T1 > 0");
  return {T1, (E2 / E1) * T1};
}

}  // namespace vqtherm

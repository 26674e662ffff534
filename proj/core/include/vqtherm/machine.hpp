// Two-qubit thermal machine: parameterization, thermal states, and the
// virtual-qubit algebra (virtual temperature, equilibrium bias/norm, regimes).
#pragma once

#include "vqtherm/types.hpp"

#include <optional>
#include <utility>

namespace vqtherm {

// Machine qubit 1 (gap E1) is reset toward a bath at T1, qubit 2 (gap E2)
// toward a bath at T2, both at rate p (optionally a distinct rate p2 for
// bath 2; the closed-form rate expressions require p2 == p).  g is the
// strength of the swap coupling that exchanges a virtual-qubit excitation
// with one quantum of the attached target system.
struct MachineParams {
  double E1 = 1.0;
  double E2 = 2.0;
  double T1 = 1.0;
  double T2 = 1.0;
  double g = 0.01;
  double p = 0.01;
  std::optional<double> p2{};

  double p1() const { return p; }
  double p2_or_p() const { return p2 ? *p2 : p; }
  bool equal_reset_rates() const { return !p2 || *p2 == p; }

  // True when g or p leave the weak-coupling domain (not << E1) in which the
  // closed-form asymptotic rates are derived.  Advisory, not an error.
  bool weak_coupling_advisory() const;
};

// Throws ConfigError unless E2 > E1 > 0, T1 > 0, T2 > 0, g > 0, p > 0
// (and p2 > 0 when set).  E2 == E1 is rejected as a zero virtual gap.
void validate(const MachineParams& m);

// Inverse virtual temperature beta_v = (E2/T2 - E1/T1) / (E2 - E1).
// Negative beta_v means population inversion on the virtual qubit.
double virtual_beta(double E1, double E2, double T1, double T2);
double virtual_beta(const MachineParams& m);

// 1/beta_v; +infinity at the engine boundary beta_v = 0.
double virtual_temperature(double E1, double E2, double T1, double T2);
double virtual_temperature(const MachineParams& m);

// diag(1, e^{-E/T}) / (1 + e^{-E/T}).  T = 0 gives the ground state, T = +inf
// the maximally mixed state, T < 0 a population-inverted state.
Eigen::Matrix2cd thermal_qubit_state(double E, double T);
Eigen::Matrix2cd thermal_qubit_state_beta(double E, double beta);

// Populations of an evenly spaced N-level ladder at inverse temperature beta,
// proportional to e^{-beta n E}, n = 0..levels-1.  beta = 0 gives uniform.
Eigen::VectorXd thermal_ladder_populations(int levels, double E, double beta);

// Equilibrium expectations over tau1 ⊗ tau2 of the virtual-qubit operators:
//   bias  Zeq = P(10) - P(01)         (sign tracks the sign of beta_v)
//   norm  Neq = P(10) + P(01)         (weight of the virtual-qubit sector)
//   antibias   = P(00) - P(11)
double equilibrium_bias(const MachineParams& m);
double equilibrium_norm(const MachineParams& m);
double equilibrium_antibias(const MachineParams& m);

struct VirtualQubitDescriptor {
  double Ev;      // virtual gap E2 - E1
  double beta_v;  // inverse virtual temperature
  double Zeq;     // equilibrium bias
  double Neq;     // equilibrium norm
};

VirtualQubitDescriptor describe_virtual_qubit(const MachineParams& m);

enum class MachineRegime {
  Refrigerator,        // 0 < T_v < min(T1, T2)
  HeatPump,            // T_v > max(T1, T2), finite
  HeatEngine,          // beta_v < 0
  ReversibleBoundary,  // T_v = T1 = T2
  EngineBoundary,      // beta_v = 0 (T_v = +-infinity)
};

std::string to_string(MachineRegime r);

MachineRegime classify_regime(const MachineParams& m);

// The two T2 thresholds (at fixed E1, E2, T1) separating the regimes:
// T2 = T1 (reversible point) and T2 = (E2/E1) T1 (engine boundary).
std::pair<double, double> regime_boundaries(double E1, double E2, double T1);

}  // namespace vqtherm

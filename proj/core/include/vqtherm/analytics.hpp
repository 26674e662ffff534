// Closed-form weak-coupling analytics: asymptotic weight dynamics, break-even
// point, machine efficiencies with their Carnot factorization, entropy flows.
#pragma once

#include "vqtherm/machine.hpp"

namespace vqtherm {

// Rate constants of the asymptotic weight dynamics at equal reset rates p:
//   alpha = g^2 p / (2 g^2 + p^2)                       (net transfer rate)
//   beta  = 2 g^4 p (g^2 + 2 p^2) / (2 g^2 + p^2)^3     (drift correction to
//                                                        the energy spread)
struct RateConstants {
  double alpha = 0.0;
  double beta = 0.0;
};

RateConstants rate_constants(double g, double p);
// Requires equal reset rates on both machine qubits.
RateConstants rate_constants(const MachineParams& m);

// Late-time behaviour of a machine driving a wide weight with level spacing
// Ew: plateau values of the machine observables and the linear-in-t growth
// rates of the weight's mean energy and energy variance.
struct AsymptoticSolution {
  Complex Delta_S{};      // transition-asymmetry plateau (purely imaginary)
  double Zv_S = 0.0;      // virtual-qubit bias plateau
  double Nv_S = 0.0;      // virtual-qubit norm plateau
  double Zbar_S = 0.0;    // antibias plateau (= equilibrium value)
  double Gamma1_S = 0.0;  // machine-qubit 1 ground-population plateau
  double Gamma2_S = 0.0;
  double lift_rate = 0.0;    // d<H_w>/dt    = -alpha Ew Zeq
  double spread_rate = 0.0;  // dVar(H_w)/dt = Ew^2 (alpha Neq - beta Zeq^2)
  double dQ1 = 0.0;          // heat flow bath 1 -> system = alpha E1 Zeq
  double dQ2 = 0.0;          // heat flow bath 2 -> system = -alpha E2 Zeq
  bool weak_coupling_advisory = false;
};

AsymptoticSolution asymptotic_solution(const MachineParams& m, double Ew);

// Time at which the weight's energy spread catches up with its mean drift
// (|mean| equals one standard deviation) and the mean energy accumulated by
// then.  Both are +infinity when the equilibrium bias Zeq vanishes.
struct BreakEvenPoint {
  double time = 0.0;    // spread_rate / lift_rate^2
  double energy = 0.0;  // lift_rate * time (signed mean displacement)
};

BreakEvenPoint break_even(const MachineParams& m, double Ew);

// Single-quantum efficiency of each operating regime, factorized as
// eta = eta_carnot * correction with correction in [0, 1]:
//   refrigerator  eta = E3/E1    (cooling drawn per unit heat from bath 1)
//   heat pump     eta = E3/E2    (heat delivered per unit heat from bath 2)
//   heat engine   eta = 1-E1/E2  (work delivered per unit heat from bath 2)
// The correction reaches 1 exactly when the target sits at the virtual
// temperature (engine: at the zero-bias boundary).
struct EfficiencyReport {
  MachineRegime kind{};
  double eta = 0.0;
  double eta_carnot = 0.0;
  double correction = 0.0;
};

// Fridge/pump require the target temperature T3; the engine must not get one
// (its target is a work repository).  E3 must match the virtual gap E2 - E1.
// Throws RegimeError when the temperature ordering contradicts the requested
// kind (Carnot factor not positive).
EfficiencyReport efficiency(MachineRegime kind, double E1, double E2, double E3,
                            double T1, double T2,
                            std::optional<double> T3 = std::nullopt);

// Classifies m and evaluates the matching efficiency with E3 = E2 - E1.
// Boundary regimes are rejected.
EfficiencyReport efficiency(const MachineParams& m,
                            std::optional<double> T3 = std::nullopt);

// Entropy bookkeeping per unit time for a useful flux Q3 (heat drawn from the
// cooled target / delivered to the pumped target / work into the weight):
//   S_flow_v = Q3 * beta_v   (flux weighted by the virtual inverse temperature)
//   Delta_S  = total entropy production rate:
//     refrigerator   Q3 (beta_v - beta3)
//     heat pump      Q3 (beta3 - beta_v)
//     heat engine   -Q3 beta_v
// Delta_S >= 0 whenever the flux direction matches the regime.
struct EntropyRates {
  double S_flow_v = 0.0;
  double Delta_S = 0.0;
};

EntropyRates entropy_rates(MachineRegime kind, double Q3, double beta_v,
                           std::optional<double> beta3 = std::nullopt);

// Residual of the machine's internal entropy balance
//   q * (E2/T2 - E1/T1 - (E2 - E1) beta_v)
// for q quanta per unit time; identically zero by the definition of beta_v.
double entropy_equality_residual(double E1, double E2, double T1, double T2,
                                 double q);

}  // namespace vqtherm

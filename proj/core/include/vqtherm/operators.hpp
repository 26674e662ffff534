// Target systems driven by the virtual qubit, the tensor-product basis layout
// |q1> ⊗ |q2> ⊗ |target>, and builders for Hamiltonians and observables.
#pragma once

#include "vqtherm/machine.hpp"

#include <variant>
#include <vector>

namespace vqtherm {

// Two-level target; optionally reset toward its own bath at T3 with rate p3.
struct QubitTarget {
  double E3 = 1.0;
  struct Bath {
    double T3 = 1.0;
    double p3 = 0.01;
  };
  std::optional<Bath> bath{};
};

// Finite evenly spaced ladder, levels 0..levels-1 with spacing E3.
struct LadderTarget {
  int levels = 3;
  double E3 = 1.0;
};

// Weight (truncated harmonic ladder): retained levels n_min..n_max with energy
// n * Ew, started at |n0>.  Models a load being lifted or lowered.
struct WeightTarget {
  double Ew = 1.0;
  int n_min = -10;
  int n_max = 10;
  int n0 = 0;
};

using TargetSystem = std::variant<QubitTarget, LadderTarget, WeightTarget>;

// Constructors with the level spacing pinned to the machine's virtual gap.
QubitTarget resonant_qubit(const MachineParams& m);
LadderTarget resonant_ladder(const MachineParams& m, int levels);
WeightTarget resonant_weight(const MachineParams& m, int half_width);

// Basis bookkeeping.  State index = (q1*2 + q2) * target_dim + k, with k the
// target level (weight level n = n_min + k).  Construction enforces resonance
// (target spacing equal to E2 - E1), window/level bounds and dimension caps.
class SystemLayout {
 public:
  static SystemLayout build(const MachineParams& m, const TargetSystem& t);

  const MachineParams& machine() const { return machine_; }
  const TargetSystem& target() const { return target_; }

  int target_dim() const { return target_dim_; }
  int dim() const { return 4 * target_dim_; }

  int index(int q1, int q2, int k) const {
    return (q1 * 2 + q2) * target_dim_ + k;
  }
  // Energy of target level k: offset + k * spacing (weight offset = n_min*Ew).
  double target_level_energy(int k) const {
    return target_energy0_ + k * target_spacing_;
  }
  double target_spacing() const { return target_spacing_; }

  bool is_weight() const { return std::holds_alternative<WeightTarget>(target_); }
  bool is_ladder() const { return std::holds_alternative<LadderTarget>(target_); }
  bool is_qubit() const { return std::holds_alternative<QubitTarget>(target_); }
  const QubitTarget* qubit() const { return std::get_if<QubitTarget>(&target_); }
  const WeightTarget* weight() const { return std::get_if<WeightTarget>(&target_); }

 private:
  SystemLayout(MachineParams m, TargetSystem t, int td, double e0, double sp)
      : machine_(std::move(m)), target_(std::move(t)), target_dim_(td),
        target_energy0_(e0), target_spacing_(sp) {}

  MachineParams machine_;
  TargetSystem target_;
  int target_dim_;
  double target_energy0_;
  double target_spacing_;
};

struct OperatorMatrix {
  std::string label;
  Matrix mat;
};

// H0 = E1 n1 + E2 n2 + H_target (diagonal in the product basis).
OperatorMatrix build_free_hamiltonian(const SystemLayout& layout);

// H_int = g * sum_k ( |0 1 k><1 0 k+1| + h.c. ): swaps a virtual-qubit
// excitation against one target quantum.  Commutes with H0 by resonance.
OperatorMatrix build_interaction(const SystemLayout& layout);

// Named observables:
//   Zv, Nv, Zbar_v  - virtual-qubit bias/norm/antibias on the machine qubits
//   Gamma1, Gamma2  - ground-state population of machine qubit 1 / 2
//   Hw, Hw2         - target energy and its square
//   Delta_op        - transition-asymmetry operator; tr(rho * Delta_op) is the
//                     (imaginary) coherence amplitude driving energy exchange
//   H1, H2, Ht      - local free Hamiltonians (embedded in the full space)
// Unknown names are rejected.
OperatorMatrix build_observable(const SystemLayout& layout, const std::string& name);

const std::vector<std::string>& observable_names();

}  // namespace vqtherm

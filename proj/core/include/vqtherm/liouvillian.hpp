// Master-equation generator for the reset model:
//   d rho/dt = -i [H0 + Hint, rho] + sum_i p_i (tau_i ⊗ tr_i rho - rho)
// with matrix-free application (D <= 256) and an explicit dense superoperator
// form (D <= 64) for stationary solves and exponential stepping.
#pragma once

#include "vqtherm/operators.hpp"

namespace vqtherm {

// Which tensor factor a reset channel acts on.
enum class Slot { Qubit1, Qubit2, Target };

enum class GeneratorPart { Full, Commutator, Dissipators };

// Lab: full generator.  Rotating: the free-Hamiltonian commutator is dropped;
// exact for every observable commuting with H0 because [H0, Hint] = 0, and it
// removes the fast energy scale from the stepper.
enum class Frame { Lab, Rotating };

// Dense superoperator acting on row-major vec(rho): vec index = i*D + j.
struct Superoperator {
  int dim = 0;
  Matrix matrix;  // D^2 x D^2
};

Vector vec(const Matrix& rho);
Matrix unvec(const Vector& v, int dim);

// One reset channel: rho -> rate * (tau_slot ⊗ tr_slot rho - rho).
struct ResetChannel {
  Slot slot = Slot::Qubit1;
  double rate = 0.0;
  Eigen::Matrix2cd tau;
};

class Liouvillian {
 public:
  // Channels: qubit 1 toward tau(E1,T1) at rate p, qubit 2 toward tau(E2,T2)
  // at rate p2 (= p unless overridden), plus tau(E3,T3) at p3 for a qubit
  // target with its own bath.
  static Liouvillian assemble(const MachineParams& m, const TargetSystem& t);

  const SystemLayout& layout() const { return layout_; }
  int dim() const { return layout_.dim(); }
  const std::vector<ResetChannel>& channels() const { return channels_; }

  struct Workspace {
    Matrix sigma;  // partial-trace scratch
  };

  // drho = L(rho); reentrant (workspace only avoids allocations).
  void apply(const Matrix& rho, Matrix& drho, Frame frame = Frame::Lab,
             GeneratorPart part = GeneratorPart::Full,
             Workspace* ws = nullptr) const;
  Matrix apply(const Matrix& rho, Frame frame = Frame::Lab,
               GeneratorPart part = GeneratorPart::Full) const;

  // Column-by-column dense assembly from the matrix-free application.
  Superoperator dense(Frame frame = Frame::Lab,
                      GeneratorPart part = GeneratorPart::Full) const;

  // D_i(rho) for a single reset channel (index into channels()).
  Matrix channel_action(std::size_t channel_index, const Matrix& rho) const;

  // Degenerate pairs (a = index(0,1,k), b = index(1,0,k+1)) coupled by Hint.
  const std::vector<std::pair<int, int>>& coupled_pairs() const {
    return pairs_;
  }

  // Largest energy mismatch across coupled pairs; ~0 by resonance, so H0 and
  // Hint commute and the rotating frame is exact.
  double commutator_residual() const;

  // Scales entering the RK4 step-size guard dt <= 0.05 / scale.
  double lab_rate_scale() const;       // max(E1, E2, max_k |E_target(k)|)
  double rotating_rate_scale() const;  // 2 g + sum_i 2 p_i

 private:
  explicit Liouvillian(SystemLayout layout);

  SystemLayout layout_;
  Eigen::VectorXd energies_;               // diagonal of H0
  Matrix phase_;                           // -i (E_i - E_j), lab-frame commutator
  std::vector<std::pair<int, int>> pairs_; // Hint index pairs
  double g_ = 0.0;
  std::vector<ResetChannel> channels_;
};

// Single reset channel as a dense superoperator; tau must be a valid qubit
// state (Hermitian, unit trace, PSD).  The slot must be a two-level factor.
Superoperator build_reset_dissipator(const SystemLayout& layout, Slot slot,
                                     double rate, const Eigen::Matrix2cd& tau);

}  // namespace vqtherm

// Time evolution (fixed-step RK4 and dense exponential stepping), stationary
// states via SVD null spaces, heat currents, and trace post-processing.
#pragma once

#include "vqtherm/liouvillian.hpp"

#include <functional>

namespace vqtherm {

enum class IntegrationMethod { Rk4, Expm };

struct IntegrationConfig {
  double t_end = 0.0;
  // Step-size upper bound; the actual step is t_end/N for the smallest N with
  // t_end/N <= dt.  RK4 enforces dt <= 0.05/scale, with scale the largest
  // energy (lab frame) or 2g + sum 2p_i (rotating frame).
  double dt = 0.0;
  IntegrationMethod method = IntegrationMethod::Rk4;
  Frame frame = Frame::Lab;
  int record_every = 1;    // sampling stride in steps
  bool hermitize = true;   // re-symmetrize the state at each sample
  bool retain_states = false;
  double edge_threshold = 1e-6;  // weight-window truncation monitor
};

struct TraceSample {
  double t = 0.0;
  double energy_mean = 0.0;  // <H_target>
  double energy_sq = 0.0;    // <H_target^2>
  double energy_var = 0.0;
  double Zv = 0.0, Nv = 0.0, Zbar = 0.0;
  Complex Delta{};           // transition asymmetry (imaginary-valued)
  double Gamma1 = 0.0, Gamma2 = 0.0;
  double dQ1 = 0.0, dQ2 = 0.0, dQ3 = 0.0;  // heat flow bath -> system
  double edge_lo = 0.0, edge_hi = 0.0;     // lowest/highest target level pop.
  double trace_err = 0.0;                  // |tr rho - 1|
};

struct ObservableTrace {
  std::vector<TraceSample> samples;
  std::vector<Matrix> states;  // filled when retain_states
  Matrix final_state;
  double max_edge_pop = 0.0;
  bool edge_flag = false;  // weight window leaked beyond edge_threshold
};

ObservableTrace evolve(const Liouvillian& L, const Matrix& rho0,
                       const IntegrationConfig& cfg);

// All recorded expectations of a single state (t is copied through).
TraceSample measure(const Liouvillian& L, const Matrix& rho, double t);

// tau1 ⊗ tau2 ⊗ |start><start| with the target started in its lowest level
// (weight: |n0>).
Matrix default_initial_state(const SystemLayout& layout);

struct StationaryResult {
  Matrix state;       // hermitized, PSD-projected, unit trace
  double residual = 0.0;  // ||L vec(state)||_2
  int nullspace_dim = 0;
  std::vector<Matrix> candidates;  // > 1 entry only for degenerate null spaces
};

struct AmbiguousStationaryError : Error {
  explicit AmbiguousStationaryError(StationaryResult r)
      : Error("stationary state is not unique (null-space dimension " +
              std::to_string(r.nullspace_dim) + ")"),
        result(std::move(r)) {}
  StationaryResult result;
};

// Null space of the dense superoperator (singular values below 1e-10 relative
// to the largest).  Throws AmbiguousStationaryError when it is degenerate.
StationaryResult stationary_state(const Superoperator& S);
StationaryResult stationary_state(const Liouvillian& L);

// tau1 ⊗ tau2 ⊗ tau_target(T_v) for an isolated qubit or finite ladder target.
Matrix predicted_stationary(const MachineParams& m, const TargetSystem& t);

enum class BathSide { Bath1, Bath2, TargetBath };

// tr(H_local * D_i(rho)): rate of heat flow from bath i into the system.
double heat_current(const Liouvillian& L, const Matrix& rho, BathSide which);

double trace_distance(const Matrix& a, const Matrix& b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

using SampleSelector = std::function<double(const TraceSample&)>;

// Selector for a named trace column: energy_mean, energy_sq, energy_var, Zv,
// Nv, Zbar_v, Gamma1, Gamma2, dQ1, dQ2, dQ3.  Unknown names are rejected.
SampleSelector sample_selector(const std::string& name);

// Least-squares line / mean over samples with t >= t_from.
LinearFit tail_fit(const ObservableTrace& trace, double t_from,
                   const SampleSelector& sel);
double tail_mean(const ObservableTrace& trace, double t_from,
                 const SampleSelector& sel);

struct ConvergenceTarget {
  std::optional<Matrix> state;  // compared by trace distance (needs retained states)
  std::vector<std::pair<std::string, double>> observables;
};

struct ConvergenceRow {
  std::string name;
  double deviation = 0.0;
  double tol = 0.0;
  bool converged = false;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool all_converged = false;
  // Deviation trend over the final 20% of samples is non-increasing (or the
  // deviation is already below tolerance).
  bool tail_decreasing = false;
};

ConvergenceReport convergence_check(const ObservableTrace& trace,
                                    const ConvergenceTarget& target,
                                    double tol);

}  // namespace vqtherm

#include "vqtherm/operators.hpp"

#include <cmath>

namespace vqtherm {

QubitTarget resonant_qubit(const MachineParams& m) {
  validate(m);
  return QubitTarget{.E3 = m.E2 - m.E1};
}

LadderTarget resonant_ladder(const MachineParams& m, int levels) {
  validate(m);
  return LadderTarget{.levels = levels, .E3 = m.E2 - m.E1};
}

WeightTarget resonant_weight(const MachineParams& m, int half_width) {
  validate(m);
  return WeightTarget{
      .Ew = m.E2 - m.E1, .n_min = -half_width, .n_max = half_width, .n0 = 0};
}

SystemLayout SystemLayout::build(const MachineParams& m, const TargetSystem& t) {
  validate(m);
  const double Ev = m.E2 - m.E1;
  const auto check_resonant = [&](double spacing) {
    if (!(spacing > 0.0)) throw ConfigError("target level spacing must be > 0");
    if (std::abs(spacing - Ev) > 1e-12 * std::max(1.0, Ev)) {
      throw ConfigError(
          "target level spacing must equal the virtual gap E2 - E1 (resonance)");
    }
  };

  int td = 0;
  double e0 = 0.0;
  double sp = 0.0;
  if (const auto* q = std::get_if<QubitTarget>(&t)) {
    check_resonant(q->E3);
    if (q->bath) {
      if (!(q->bath->T3 > 0.0)) throw ConfigError("target.bath.T3 must be > 0");
      if (!(q->bath->p3 > 0.0)) throw ConfigError("target.bath.p3 must be > 0");
    }
    td = 2;
    sp = q->E3;
  } else if (const auto* l = std::get_if<LadderTarget>(&t)) {
    check_resonant(l->E3);
    if (l->levels < 2) throw ConfigError("target.levels must be >= 2");
    td = l->levels;
    sp = l->E3;
  } else {
    const auto& w = std::get<WeightTarget>(t);
    check_resonant(w.Ew);
    const int width = w.n_max - w.n_min + 1;
    if (width < 5) throw ConfigError("weight window must span at least 5 levels");
    if (w.n0 < w.n_min || w.n0 > w.n_max) {
      throw ConfigError("weight n0 must lie inside [n_min, n_max]");
    }
    td = width;
    e0 = w.n_min * w.Ew;
    sp = w.Ew;
  }
  if (4 * td > kMaxDim) {
    throw GuardError("total dimension " + std::to_string(4 * td) +
                     " exceeds the cap of " + std::to_string(kMaxDim));
  }
  return SystemLayout(m, t, td, e0, sp);
}

OperatorMatrix build_free_hamiltonian(const SystemLayout& layout) {
  const int D = layout.dim();
  Matrix h = Matrix::Zero(D, D);
  const auto& m = layout.machine();
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int k = 0; k < layout.target_dim(); ++k) {
        const double e =
            q1 * m.E1 + q2 * m.E2 + layout.target_level_energy(k);
        h(layout.index(q1, q2, k), layout.index(q1, q2, k)) = e;
      }
  return {"H0", std::move(h)};
}

OperatorMatrix build_interaction(const SystemLayout& layout) {
  const int D = layout.dim();
  Matrix h = Matrix::Zero(D, D);
  const double g = layout.machine().g;
  for (int k = 0; k + 1 < layout.target_dim(); ++k) {
    const int a = layout.index(0, 1, k);
    const int b = layout.index(1, 0, k + 1);
    h(a, b) = g;
    h(b, a) = g;
  }
  return {"Hint", std::move(h)};
}

const std::vector<std::string>& observable_names() {
  static const std::vector<std::string> names = {
      "Zv", "Nv", "Zbar_v", "Gamma1", "Gamma2",
      "Hw", "Hw2", "Delta_op", "H1", "H2", "Ht"};
  return names;
}

OperatorMatrix build_observable(const SystemLayout& layout,
                                const std::string& name) {
  const int D = layout.dim();
  const int td = layout.target_dim();
  Matrix op = Matrix::Zero(D, D);
  const auto for_each_state = [&](auto&& fn) {
    for (int q1 = 0; q1 < 2; ++q1)
      for (int q2 = 0; q2 < 2; ++q2)
        for (int k = 0; k < td; ++k) fn(q1, q2, k, layout.index(q1, q2, k));
  };

  if (name == "Zv") {
    for_each_state([&](int q1, int q2, int, int s) {
      if (q1 == 1 && q2 == 0) op(s, s) = 1.0;
      if (q1 == 0 && q2 == 1) op(s, s) = -1.0;
    });
  } else if (name == "Nv") {
    for_each_state([&](int q1, int q2, int, int s) {
      if (q1 != q2) op(s, s) = 1.0;
    });
  } else if (name == "Zbar_v") {
    for_each_state([&](int q1, int q2, int, int s) {
      if (q1 == 0 && q2 == 0) op(s, s) = 1.0;
      if (q1 == 1 && q2 == 1) op(s, s) = -1.0;
    });
  } else if (name == "Gamma1") {
    for_each_state([&](int q1, int, int, int s) {
      if (q1 == 0) op(s, s) = 1.0;
    });
  } else if (name == "Gamma2") {
    for_each_state([&](int, int q2, int, int s) {
      if (q2 == 0) op(s, s) = 1.0;
    });
  } else if (name == "Hw" || name == "Ht") {
    for_each_state([&](int, int, int k, int s) {
      op(s, s) = layout.target_level_energy(k);
    });
  } else if (name == "Hw2") {
    for_each_state([&](int, int, int k, int s) {
      const double e = layout.target_level_energy(k);
      op(s, s) = e * e;
    });
  } else if (name == "Delta_op") {
    // tr(rho * Delta_op) = sum_k <0 1 k|rho|1 0 k+1> - <1 0 k+1|rho|0 1 k>.
    for (int k = 0; k + 1 < td; ++k) {
      const int a = layout.index(0, 1, k);
      const int b = layout.index(1, 0, k + 1);
      op(b, a) = 1.0;
      op(a, b) = -1.0;
    }
  } else if (name == "H1") {
    for_each_state([&](int q1, int, int, int s) {
      if (q1 == 1) op(s, s) = layout.machine().E1;
    });
  } else if (name == "H2") {
    for_each_state([&](int, int q2, int, int s) {
      if (q2 == 1) op(s, s) = layout.machine().E2;
    });
  } else {
    throw ConfigError("unknown observable: " + name);
  }
  return {name, std::move(op)};
}

}  // namespace vqtherm

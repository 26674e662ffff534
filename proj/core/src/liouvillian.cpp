#include "vqtherm/liouvillian.hpp"

#include <cmath>

namespace vqtherm {

namespace {

// Complement dimensions (dl, dr) of a two-level slot: full index decomposes
// as (l*2 + q)*dr + r with l < dl, q in {0,1}, r < dr.
std::pair<int, int> slot_dims(const SystemLayout& layout, Slot slot) {
  const int td = layout.target_dim();
  switch (slot) {
    case Slot::Qubit1: return {1, 2 * td};
    case Slot::Qubit2: return {2, td};
    case Slot::Target:
      if (td != 2) {
        throw ConfigError("reset dissipator requires a two-level factor");
      }
      return {4, 1};
  }
  throw ConfigError("bad slot");
}

// out += rate * (tau_slot ⊗ tr_slot rho - rho)
void apply_reset(const SystemLayout& layout, const ResetChannel& ch,
                 const Matrix& rho, Matrix& out, Matrix& sigma) {
  const auto [dl, dr] = slot_dims(layout, ch.slot);
  const int m = dl * dr;
  sigma.resize(m, m);
  for (int l = 0; l < dl; ++l)
    for (int lp = 0; lp < dl; ++lp) {
      sigma.block(l * dr, lp * dr, dr, dr) =
          rho.block((l * 2 + 0) * dr, (lp * 2 + 0) * dr, dr, dr) +
          rho.block((l * 2 + 1) * dr, (lp * 2 + 1) * dr, dr, dr);
    }
  for (int l = 0; l < dl; ++l)
    for (int q = 0; q < 2; ++q)
      for (int lp = 0; lp < dl; ++lp)
        for (int qp = 0; qp < 2; ++qp) {
          const Complex w = ch.rate * ch.tau(q, qp);
          if (w == 0.0) continue;
          out.block((l * 2 + q) * dr, (lp * 2 + qp) * dr, dr, dr) +=
              w * sigma.block(l * dr, lp * dr, dr, dr);
        }
  out -= ch.rate * rho;
}

}  // namespace

Vector vec(const Matrix& rho) {
  const int rows = static_cast<int>(rho.rows());
  const int cols = static_cast<int>(rho.cols());
  Vector v(rows * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) v[i * cols + j] = rho(i, j);
  return v;
}

Matrix unvec(const Vector& v, int dim) {
  if (v.size() != static_cast<long>(dim) * dim) {
    throw ConfigError("unvec: size mismatch");
  }
  Matrix rho(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) rho(i, j) = v[i * dim + j];
  return rho;
}

Liouvillian::Liouvillian(SystemLayout layout) : layout_(std::move(layout)) {}

Liouvillian Liouvillian::assemble(const MachineParams& m,
                                  const TargetSystem& t) {
  Liouvillian L(SystemLayout::build(m, t));
  const auto& lay = L.layout_;
  const int D = lay.dim();

  L.energies_.resize(D);
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int k = 0; k < lay.target_dim(); ++k) {
        L.energies_[lay.index(q1, q2, k)] =
            q1 * m.E1 + q2 * m.E2 + lay.target_level_energy(k);
      }
  L.phase_.resize(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      L.phase_(i, j) = -kImag * (L.energies_[i] - L.energies_[j]);
    }

  for (int k = 0; k + 1 < lay.target_dim(); ++k) {
    L.pairs_.emplace_back(lay.index(0, 1, k), lay.index(1, 0, k + 1));
  }
  L.g_ = m.g;

  L.channels_.push_back(
      {Slot::Qubit1, m.p1(), thermal_qubit_state(m.E1, m.T1)});
  L.channels_.push_back(
      {Slot::Qubit2, m.p2_or_p(), thermal_qubit_state(m.E2, m.T2)});
  if (const auto* q = lay.qubit(); q && q->bath) {
    L.channels_.push_back(
        {Slot::Target, q->bath->p3, thermal_qubit_state(q->E3, q->bath->T3)});
  }
  return L;
}

void Liouvillian::apply(const Matrix& rho, Matrix& drho, Frame frame,
                        GeneratorPart part, Workspace* ws) const {
  const int D = dim();
  if (rho.rows() != D || rho.cols() != D) {
    throw ConfigError("state dimension does not match the generator");
  }
  Workspace local;
  Workspace& w = ws ? *ws : local;

  const bool want_comm = part != GeneratorPart::Dissipators;
  const bool want_diss = part != GeneratorPart::Commutator;

  if (want_comm && frame == Frame::Lab) {
    drho = phase_.cwiseProduct(rho);
  } else {
    drho.resize(D, D);
    drho.setZero();
  }
  if (want_comm) {
    const Complex cg(0.0, -g_);  // -i g
    for (const auto& [a, b] : pairs_) {
      drho.row(a) += cg * rho.row(b);
      drho.row(b) += cg * rho.row(a);
      drho.col(a) -= cg * rho.col(b);
      drho.col(b) -= cg * rho.col(a);
    }
  }
  if (want_diss) {
    for (const auto& ch : channels_) {
      apply_reset(layout_, ch, rho, drho, w.sigma);
    }
  }
}

Matrix Liouvillian::apply(const Matrix& rho, Frame frame,
                          GeneratorPart part) const {
  Matrix out;
  apply(rho, out, frame, part, nullptr);
  return out;
}

Superoperator Liouvillian::dense(Frame frame, GeneratorPart part) const {
  const int D = dim();
  if (D > kMaxDenseDim) {
    throw GuardError("dense superoperator assembly capped at D <= " +
                     std::to_string(kMaxDenseDim) + " (got D = " +
                     std::to_string(D) + ")");
  }
  Superoperator S;
  S.dim = D;
  S.matrix.resize(D * D, D * D);
  Matrix unit = Matrix::Zero(D, D);
  Matrix out(D, D);
  Workspace ws;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      unit(i, j) = 1.0;
      apply(unit, out, frame, part, &ws);
      S.matrix.col(i * D + j) = vec(out);
      unit(i, j) = 0.0;
    }
  return S;
}

Matrix Liouvillian::channel_action(std::size_t channel_index,
                                   const Matrix& rho) const {
  if (channel_index >= channels_.size()) {
    throw ConfigError("reset channel index out of range");
  }
  Matrix out = Matrix::Zero(dim(), dim());
  Matrix sigma;
  apply_reset(layout_, channels_[channel_index], rho, out, sigma);
  return out;
}

double Liouvillian::commutator_residual() const {
  double r = 0.0;
  for (const auto& [a, b] : pairs_) {
    r = std::max(r, std::abs(energies_[a] - energies_[b]));
  }
  return r;
}

double Liouvillian::lab_rate_scale() const {
  double s = std::max(layout_.machine().E1, layout_.machine().E2);
  for (int k = 0; k < layout_.target_dim(); ++k) {
    s = std::max(s, std::abs(layout_.target_level_energy(k)));
  }
  return s;
}

double Liouvillian::rotating_rate_scale() const {
  double s = 2.0 * g_;
  for (const auto& ch : channels_) s += 2.0 * ch.rate;
  return s;
}

Superoperator build_reset_dissipator(const SystemLayout& layout, Slot slot,
                                     double rate,
                                     const Eigen::Matrix2cd& tau) {
  if (!(rate > 0.0)) throw ConfigError("reset rate must be > 0");
  if ((tau - tau.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("reset target state must be Hermitian");
  }
  if (std::abs(tau.trace().real() - 1.0) > 1e-12 ||
      std::abs(tau.trace().imag()) > 1e-12) {
    throw ConfigError("reset target state must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(tau);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw ConfigError("reset target state must be positive semidefinite");
  }
  const int D = layout.dim();
  if (D > kMaxDenseDim) {
    throw GuardError("dense superoperator assembly capped at D <= " +
                     std::to_string(kMaxDenseDim));
  }
  slot_dims(layout, slot);  // validates the slot is two-level

  ResetChannel ch{slot, rate, tau};
  Superoperator S;
  S.dim = D;
  S.matrix.resize(D * D, D * D);
  Matrix unit = Matrix::Zero(D, D);
  Matrix out(D, D);
  Matrix sigma;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      unit(i, j) = 1.0;
      out.setZero(D, D);
      apply_reset(layout, ch, unit, out, sigma);
      S.matrix.col(i * D + j) = vec(out);
      unit(i, j) = 0.0;
    }
  return S;
}

}  // namespace vqtherm

#include "vqtherm/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace vqtherm {

namespace {

Matrix psd_project(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) ev[i] = std::max(ev[i], 0.0);
  Matrix out = es.eigenvectors() * ev.cast<Complex>().asDiagonal() *
               es.eigenvectors().adjoint();
  const double tr = out.trace().real();
  if (!(tr > 0.0)) {
    throw Error("stationary candidate has non-positive trace after projection");
  }
  return out / tr;
}

}  // namespace

TraceSample measure(const Liouvillian& L, const Matrix& rho, double t) {
  const auto& lay = L.layout();
  const int td = lay.target_dim();
  TraceSample s;
  s.t = t;
  Complex tr{};
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int k = 0; k < td; ++k) {
        const Complex dc = rho(lay.index(q1, q2, k), lay.index(q1, q2, k));
        const double d = dc.real();
        tr += dc;
        const double e = lay.target_level_energy(k);
        s.energy_mean += e * d;
        s.energy_sq += e * e * d;
        if (q1 == 0) s.Gamma1 += d;
        if (q2 == 0) s.Gamma2 += d;
        if (q1 == 1 && q2 == 0) s.Zv += d;
        if (q1 == 0 && q2 == 1) s.Zv -= d;
        if (q1 != q2) s.Nv += d;
        if (q1 == 0 && q2 == 0) s.Zbar += d;
        if (q1 == 1 && q2 == 1) s.Zbar -= d;
        if (k == 0) s.edge_lo += d;
        if (k == td - 1) s.edge_hi += d;
      }
  s.energy_var = s.energy_sq - s.energy_mean * s.energy_mean;
  s.trace_err = std::abs(tr - 1.0);
  for (const auto& [a, b] : L.coupled_pairs()) {
    s.Delta += rho(a, b) - rho(b, a);
  }
  s.dQ1 = heat_current(L, rho, BathSide::Bath1);
  s.dQ2 = heat_current(L, rho, BathSide::Bath2);
  const auto* q = lay.qubit();
  s.dQ3 = (q && q->bath) ? heat_current(L, rho, BathSide::TargetBath) : 0.0;
  return s;
}

Matrix default_initial_state(const SystemLayout& layout) {
  const auto& m = layout.machine();
  const Eigen::Matrix2cd tau1 = thermal_qubit_state(m.E1, m.T1);
  const Eigen::Matrix2cd tau2 = thermal_qubit_state(m.E2, m.T2);
  int k0 = 0;
  if (const auto* w = layout.weight()) k0 = w->n0 - w->n_min;
  Matrix rho = Matrix::Zero(layout.dim(), layout.dim());
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2) {
      const int idx = layout.index(q1, q2, k0);
      rho(idx, idx) = tau1(q1, q1) * tau2(q2, q2);
    }
  return rho;
}

ObservableTrace evolve(const Liouvillian& L, const Matrix& rho0,
                       const IntegrationConfig& cfg) {
  const int D = L.dim();
  if (rho0.rows() != D || rho0.cols() != D) {
    throw ConfigError("initial state dimension does not match the generator");
  }
  if (!(cfg.t_end > 0.0)) throw ConfigError("integration.t_end must be > 0");
  if (!(cfg.dt > 0.0)) throw ConfigError("integration.dt must be > 0");
  if (cfg.record_every < 1) {
    throw ConfigError("integration.record_every must be >= 1");
  }
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ConfigError("initial state must be Hermitian");
  }
  if (std::abs(rho0.trace() - 1.0) > 1e-10) {
    throw ConfigError("initial state must have unit trace");
  }

  const long nsteps = std::max<long>(
      1, static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-12)));
  const double dt = cfg.t_end / static_cast<double>(nsteps);

  if (cfg.method == IntegrationMethod::Rk4) {
    const double scale = cfg.frame == Frame::Lab ? L.lab_rate_scale()
                                                 : L.rotating_rate_scale();
    const double dt_max = 0.05 / scale;
    if (dt > dt_max * (1.0 + 1e-9)) {
      throw GuardError("RK4 step-size guard violated: dt = " +
                       std::to_string(dt) + " exceeds 0.05/scale = " +
                       std::to_string(dt_max));
    }
  }

  ObservableTrace trace;
  Matrix rho = rho0;

  const auto record = [&](double t) {
    if (cfg.hermitize) rho = (0.5 * (rho + rho.adjoint())).eval();
    TraceSample s = measure(L, rho, t);
    trace.max_edge_pop = std::max({trace.max_edge_pop, s.edge_lo, s.edge_hi});
    trace.samples.push_back(s);
    if (cfg.retain_states) trace.states.push_back(rho);
  };

  record(0.0);

  if (cfg.method == IntegrationMethod::Rk4) {
    Matrix k1(D, D), k2(D, D), k3(D, D), k4(D, D), tmp(D, D);
    Liouvillian::Workspace ws;
    for (long step = 1; step <= nsteps; ++step) {
      L.apply(rho, k1, cfg.frame, GeneratorPart::Full, &ws);
      tmp = rho + (0.5 * dt) * k1;
      L.apply(tmp, k2, cfg.frame, GeneratorPart::Full, &ws);
      tmp = rho + (0.5 * dt) * k2;
      L.apply(tmp, k3, cfg.frame, GeneratorPart::Full, &ws);
      tmp = rho + dt * k3;
      L.apply(tmp, k4, cfg.frame, GeneratorPart::Full, &ws);
      rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (step % cfg.record_every == 0 || step == nsteps) record(step * dt);
    }
  } else {
    const Superoperator S = L.dense(cfg.frame);
    const Matrix stepper = (S.matrix * dt).exp();
    Vector v = vec(rho);
    for (long step = 1; step <= nsteps; ++step) {
      v = stepper * v;
      if (step % cfg.record_every == 0 || step == nsteps) {
        rho = unvec(v, D);
        record(step * dt);
        if (cfg.hermitize) v = vec(rho);
      }
    }
  }

  trace.final_state = rho;
  trace.edge_flag =
      L.layout().is_weight() && trace.max_edge_pop > cfg.edge_threshold;
  return trace;
}

StationaryResult stationary_state(const Superoperator& S) {
  if (S.dim <= 0 || S.matrix.rows() != S.matrix.cols() ||
      S.matrix.rows() != static_cast<long>(S.dim) * S.dim) {
    throw ConfigError("malformed superoperator");
  }
  Eigen::BDCSVD<Matrix> svd(S.matrix, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = std::max(smax, 1e-300) * 1e-10;

  int null_dim = 0;
  for (int i = static_cast<int>(sv.size()) - 1; i >= 0; --i) {
    if (sv(i) <= tol) ++null_dim;
    else break;
  }

  StationaryResult res;
  res.nullspace_dim = std::max(null_dim, 1);
  const int take = res.nullspace_dim;
  for (int c = 0; c < take; ++c) {
    Vector col = svd.matrixV().col(svd.matrixV().cols() - 1 - c);
    Matrix M = unvec(col, S.dim);
    M = (0.5 * (M + M.adjoint())).eval();
    const double tr = M.trace().real();
    if (std::abs(tr) > 1e-8 * M.norm()) {
      M /= tr;
    } else {
      M /= M.norm();  // traceless null direction; report unit Frobenius norm
    }
    res.candidates.push_back(std::move(M));
  }

  if (res.nullspace_dim > 1) {
    res.state = res.candidates.front();
    res.residual = (S.matrix * vec(res.state)).norm();
    throw AmbiguousStationaryError(std::move(res));
  }

  res.state = psd_project(res.candidates.front());
  res.residual = (S.matrix * vec(res.state)).norm();
  return res;
}

StationaryResult stationary_state(const Liouvillian& L) {
  return stationary_state(L.dense());
}

Matrix predicted_stationary(const MachineParams& m, const TargetSystem& t) {
  const SystemLayout lay = SystemLayout::build(m, t);
  if (lay.is_weight()) {
    throw ConfigError(
        "predicted stationary state requires a finite qubit or ladder target");
  }
  if (const auto* q = lay.qubit(); q && q->bath) {
    throw ConfigError(
        "predicted stationary state requires an isolated target (no bath)");
  }
  const double bv = virtual_beta(m);
  Eigen::VectorXd pops;
  if (lay.is_qubit()) {
    const Eigen::Matrix2cd tauv =
        thermal_qubit_state_beta(lay.target_spacing(), bv);
    pops.resize(2);
    pops << tauv(0, 0).real(), tauv(1, 1).real();
  } else {
    pops = thermal_ladder_populations(lay.target_dim(), lay.target_spacing(), bv);
  }
  const Eigen::Matrix2cd tau1 = thermal_qubit_state(m.E1, m.T1);
  const Eigen::Matrix2cd tau2 = thermal_qubit_state(m.E2, m.T2);
  Matrix rho = Matrix::Zero(lay.dim(), lay.dim());
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int k = 0; k < lay.target_dim(); ++k) {
        const int idx = lay.index(q1, q2, k);
        rho(idx, idx) = tau1(q1, q1) * tau2(q2, q2) * pops[k];
      }
  return rho;
}

double heat_current(const Liouvillian& L, const Matrix& rho, BathSide which) {
  const auto& lay = L.layout();
  const Slot slot = which == BathSide::Bath1   ? Slot::Qubit1
                    : which == BathSide::Bath2 ? Slot::Qubit2
                                               : Slot::Target;
  const auto& chans = L.channels();
  std::size_t ci = chans.size();
  for (std::size_t i = 0; i < chans.size(); ++i) {
    if (chans[i].slot == slot) {
      ci = i;
      break;
    }
  }
  if (ci == chans.size()) {
    throw ConfigError("no reset channel attached to the requested bath");
  }
  const Matrix d = L.channel_action(ci, rho);
  double flow = 0.0;
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int k = 0; k < lay.target_dim(); ++k) {
        double h = 0.0;
        switch (which) {
          case BathSide::Bath1: h = q1 * lay.machine().E1; break;
          case BathSide::Bath2: h = q2 * lay.machine().E2; break;
          case BathSide::TargetBath: h = lay.target_level_energy(k); break;
        }
        flow += h * d(lay.index(q1, q2, k), lay.index(q1, q2, k)).real();
      }
  return flow;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ConfigError("trace distance needs equal dimensions");
  }
  Matrix d = a - b;
  d = (0.5 * (d + d.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

SampleSelector sample_selector(const std::string& name) {
  if (name == "energy_mean") return [](const TraceSample& s) { return s.energy_mean; };
  if (name == "energy_sq") return [](const TraceSample& s) { return s.energy_sq; };
  if (name == "energy_var") return [](const TraceSample& s) { return s.energy_var; };
  if (name == "Zv") return [](const TraceSample& s) { return s.Zv; };
  if (name == "Nv") return [](const TraceSample& s) { return s.Nv; };
  if (name == "Zbar_v") return [](const TraceSample& s) { return s.Zbar; };
  if (name == "Gamma1") return [](const TraceSample& s) { return s.Gamma1; };
  if (name == "Gamma2") return [](const TraceSample& s) { return s.Gamma2; };
  if (name == "dQ1") return [](const TraceSample& s) { return s.dQ1; };
  if (name == "dQ2") return [](const TraceSample& s) { return s.dQ2; };
  if (name == "dQ3") return [](const TraceSample& s) { return s.dQ3; };
  throw ConfigError("unknown observable: " + name);
}

LinearFit tail_fit(const ObservableTrace& trace, double t_from,
                   const SampleSelector& sel) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : trace.samples) {
    if (s.t >= t_from - 1e-12) pts.emplace_back(s.t, sel(s));
  }
  if (pts.size() < 2) throw ConfigError("tail window holds fewer than 2 samples");
  double xm = 0.0, ym = 0.0;
  for (const auto& [x, y] : pts) {
    xm += x;
    ym += y;
  }
  xm /= pts.size();
  ym /= pts.size();
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - xm) * (x - xm);
    sxy += (x - xm) * (y - ym);
  }
  if (sxx == 0.0) throw ConfigError("tail window has no time spread");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  return fit;
}

double tail_mean(const ObservableTrace& trace, double t_from,
                 const SampleSelector& sel) {
  double sum = 0.0;
  long n = 0;
  for (const auto& s : trace.samples) {
    if (s.t >= t_from - 1e-12) {
      sum += sel(s);
      ++n;
    }
  }
  if (n == 0) throw ConfigError("tail window holds no samples");
  return sum / n;
}

ConvergenceReport convergence_check(const ObservableTrace& trace,
                                    const ConvergenceTarget& target,
                                    double tol) {
  const std::size_t n = trace.samples.size();
  if (n == 0) throw ConfigError("convergence check needs a non-empty trace");

  ConvergenceReport rep;
  std::vector<std::vector<double>> series;

  if (target.state) {
    if (trace.states.size() != n) {
      throw ConfigError(
          "state-level convergence target requires retain_states");
    }
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) {
      dev[i] = trace_distance(trace.states[i], *target.state);
    }
    rep.rows.push_back({"state", dev.back(), tol, dev.back() <= tol});
    series.push_back(std::move(dev));
  }
  for (const auto& [name, value] : target.observables) {
    const auto sel = sample_selector(name);
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) {
      dev[i] = std::abs(sel(trace.samples[i]) - value);
    }
    rep.rows.push_back({name, dev.back(), tol, dev.back() <= tol});
    series.push_back(std::move(dev));
  }
  if (rep.rows.empty()) throw ConfigError("convergence target is empty");

  rep.all_converged = std::all_of(rep.rows.begin(), rep.rows.end(),
                                  [](const ConvergenceRow& r) { return r.converged; });

  // Envelope of all deviations over the final 20% of samples.
  std::vector<double> env(n, 0.0);
  for (const auto& dev : series) {
    for (std::size_t i = 0; i < n; ++i) env[i] = std::max(env[i], dev[i]);
  }
  std::size_t start = n > 5 ? n - n / 5 : 0;
  if (n - start < 3) start = n >= 3 ? n - 3 : 0;
  if (env.back() <= tol) {
    rep.tail_decreasing = true;
  } else if (n - start >= 2) {
    double xm = 0.0, ym = 0.0, peak = 0.0;
    for (std::size_t i = start; i < n; ++i) {
      xm += trace.samples[i].t;
      ym += env[i];
      peak = std::max(peak, env[i]);
    }
    const double cnt = static_cast<double>(n - start);
    xm /= cnt;
    ym /= cnt;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = start; i < n; ++i) {
      sxx += (trace.samples[i].t - xm) * (trace.samples[i].t - xm);
      sxy += (trace.samples[i].t - xm) * (env[i] - ym);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    const double span = trace.samples[n - 1].t - trace.samples[start].t;
    rep.tail_decreasing = slope <= 0.0 || slope * span <= 0.05 * peak;
  } else {
    rep.tail_decreasing = false;
  }
  return rep;
}

}  // namespace vqtherm

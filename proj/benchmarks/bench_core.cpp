#include "vqtherm/dynamics.hpp"

#include <benchmark/benchmark.h>

using namespace vqtherm;

namespace {

MachineParams engine_machine() {
  MachineParams m;
  m.E1 = 1.0;
  m.E2 = 2.0;
  m.T1 = 1.0;
  m.T2 = 4.0;
  m.g = 0.01;
  m.p = 0.01;
  return m;
}

void BM_DenseAssembly(benchmark::State& state) {
  const MachineParams m = engine_machine();
  const Liouvillian L =
      Liouvillian::assemble(m, resonant_ladder(m, static_cast<int>(state.range(0))));
  for (auto _ : state) {
    const Superoperator S = L.dense();
    benchmark::DoNotOptimize(S.matrix.data());
  }
}
BENCHMARK(BM_DenseAssembly)->Arg(2)->Arg(4)->Arg(8);  // D = 8, 16, 32

void BM_MatrixFreeApply(benchmark::State& state) {
  const MachineParams m = engine_machine();
  const Liouvillian L = Liouvillian::assemble(m, resonant_weight(m, 30));  // D = 244
  const Matrix rho = default_initial_state(L.layout());
  Matrix drho(L.dim(), L.dim());
  Liouvillian::Workspace ws;
  for (auto _ : state) {
    L.apply(rho, drho, Frame::Rotating, GeneratorPart::Full, &ws);
    benchmark::DoNotOptimize(drho.data());
  }
}
BENCHMARK(BM_MatrixFreeApply);

void BM_Rk4WeightRun(benchmark::State& state) {
  const MachineParams m = engine_machine();
  const Liouvillian L = Liouvillian::assemble(m, resonant_weight(m, 30));
  const Matrix rho0 = default_initial_state(L.layout());
  IntegrationConfig cfg;
  cfg.frame = Frame::Rotating;
  cfg.dt = 0.5;
  cfg.t_end = 50.0;
  cfg.record_every = 100;
  for (auto _ : state) {
    const ObservableTrace tr = evolve(L, rho0, cfg);
    benchmark::DoNotOptimize(tr.samples.back().energy_mean);
  }
}
BENCHMARK(BM_Rk4WeightRun);

void BM_StationarySvd(benchmark::State& state) {
  const MachineParams m = engine_machine();
  const Liouvillian L =
      Liouvillian::assemble(m, resonant_ladder(m, static_cast<int>(state.range(0))));
  const Superoperator S = L.dense();
  for (auto _ : state) {
    const StationaryResult st = stationary_state(S);
    benchmark::DoNotOptimize(st.residual);
  }
}
BENCHMARK(BM_StationarySvd)->Arg(2)->Arg(5);  // D = 8, 20

}  // namespace

BENCHMARK_MAIN();

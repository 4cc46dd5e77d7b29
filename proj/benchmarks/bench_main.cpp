#include <benchmark/benchmark.h>

#include "zeno/dynamics.hpp"
#include "zeno/spectra.hpp"

namespace {

using namespace zeno;

struct Setup {
  Grid2D grid;
  IonPair ions;
  UnitSystem units;
  ConstraintMask mask;

  explicit Setup(int n)
      : grid(2e-6, n), units(1e-6, ions.charges.m1), mask(build_mask(grid, 1e-6, ions.charges)) {}
};

void BM_BuildMask(benchmark::State& state) {
  const Grid2D grid(2e-6, static_cast<int>(state.range(0)));
  const ChargeConfig protons = ChargeConfig::protons();
  for (auto _ : state) benchmark::DoNotOptimize(build_mask(grid, 1e-6, protons));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildMask)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

void BM_BuildMaskExhaustive(benchmark::State& state) {
  const Grid2D grid(2e-6, static_cast<int>(state.range(0)));
  const ChargeConfig protons = ChargeConfig::protons();
  for (auto _ : state) benchmark::DoNotOptimize(build_mask_exhaustive(grid, 1e-6, protons));
}
BENCHMARK(BM_BuildMaskExhaustive)->Arg(1024)->Arg(4096);

void BM_ApplyHamiltonian(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  const HamiltonianOperator H = assemble(s.grid, s.mask, s.ions, s.units);
  std::vector<Complex> x(static_cast<std::size_t>(H.size()), Complex{1.0, 0.5}), y(x.size());
  for (auto _ : state) {
    H.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * H.size());
}
BENCHMARK(BM_ApplyHamiltonian)->Arg(1024)->Arg(4096);

void BM_CrankNicolsonStep(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  const ConfinedGroundState g = confined_ground_state(s.grid, s.mask, s.ions, s.units);
  const auto region = evolution_region(g.result.psi0, 1e-12, s.ions, s.units, 0);
  const HamiltonianOperator H = assemble_on(s.grid, region, s.ions, s.units);
  const Wavefunction start = g.result.psi0.embedded(region);
  std::vector<Complex> x(start.amplitudes().begin(), start.amplitudes().end());
  CrankNicolson cn(H, 1e-12 / 16);
  for (auto _ : state) benchmark::DoNotOptimize(cn.step(x));
  state.SetItemsProcessed(state.iterations() * H.size());
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(4095)->Arg(8191)->Unit(benchmark::kMillisecond);

void BM_GroundState(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(confined_ground_state(s.grid, s.mask, s.ions, s.units));
}
BENCHMARK(BM_GroundState)->Arg(2047)->Arg(4095)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

// Micro-benchmarks for the hot paths: matrix assembly, dense eigensolves,
// iteration sweeps, moment tables, and phase integrals.

#include <benchmark/benchmark.h>

#include "stringspectra/collocation.hpp"
#include "stringspectra/density.hpp"
#include "stringspectra/grid.hpp"
#include "stringspectra/iterate.hpp"
#include "stringspectra/linalg.hpp"
#include "stringspectra/perturbation.hpp"
#include "stringspectra/wkb.hpp"

namespace {

using namespace stringspectra;

void BM_SecondDerivativeMatrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const DerivativeMatrix m(n, 0.5);
        benchmark::DoNotOptimize(m.at(0, 0));
    }
}
BENCHMARK(BM_SecondDerivativeMatrix)->Arg(128)->Arg(256);

void BM_AssembleSymmetrized(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const LsfGrid grid(n);
    const SampledDensity rho =
        sample_density(DensityProfile::borg(1.0), grid.interior_grid());
    for (auto _ : state) {
        const SymmetricMatrix m = assemble_symmetrized(rho, grid);
        benchmark::DoNotOptimize(m.at(0, 0));
    }
}
BENCHMARK(BM_AssembleSymmetrized)->Arg(128)->Arg(256);

void BM_EigensolveSymmetric(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const LsfGrid grid(n);
    const SampledDensity rho =
        sample_density(DensityProfile::borg(1.0), grid.interior_grid());
    const SymmetricMatrix m = assemble_symmetrized(rho, grid);
    for (auto _ : state) {
        EigenDecomposition d = eigensolve_symmetric(m);
        benchmark::DoNotOptimize(d.eigenvalues[0]);
    }
}
BENCHMARK(BM_EigensolveSymmetric)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_IterationSweep(benchmark::State& state) {
    const GridPtr grid = Grid::uniform(-0.5, 0.5, state.range(0));
    const SampledDensity rho = sample_density(DensityProfile::borg(10.0), grid);
    SampledFunction xi = SampledFunction::from(grid, [](double) { return 1.0; });
    normalize_l2(xi);
    for (auto _ : state) {
        xi = theorem1_step(xi, rho);
        benchmark::DoNotOptimize(xi.values.front());
    }
}
BENCHMARK(BM_IterationSweep)->Arg(4001)->Arg(40001);

void BM_SigmaMatrix(benchmark::State& state) {
    const int k_max = static_cast<int>(state.range(0));
    const DensityProfile rho = DensityProfile::parabolic(1.0);
    for (auto _ : state) {
        const SigmaMatrix sigma(rho, k_max);
        benchmark::DoNotOptimize(sigma.at(1, 1));
    }
}
BENCHMARK(BM_SigmaMatrix)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_PhaseIntegral(benchmark::State& state) {
    const DensityProfile rho = DensityProfile::borg(10.0);
    for (auto _ : state) {
        const PhaseIntegral phi(rho, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(phi.total());
    }
}
BENCHMARK(BM_PhaseIntegral)->Arg(1024)->Arg(8192);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cmath>

#include "kplab/linalg.hpp"
#include "kplab/linearized.hpp"
#include "kplab/soliton.hpp"
#include "kplab/solver.hpp"
#include "kplab/spectral.hpp"

using namespace kplab;

namespace {

spectral::Grid grid_for(const benchmark::State& state) {
  return spectral::Grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 64.0);
}

spectral::RealField bump(const spectral::Grid& g) {
  return spectral::sample(g, [](double x, double y) {
    return std::exp(-x * x / 8.0) * (1.0 + 0.1 * std::cos(y));
  });
}

void BM_ForwardTransform(benchmark::State& state) {
  const spectral::Grid g = grid_for(state);
  const spectral::RealField u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::forward_transform(u));
  state.SetItemsProcessed(state.iterations() * g.nx() * g.ny());
}
BENCHMARK(BM_ForwardTransform)->Args({256, 16})->Args({512, 64})->Args({1024, 128});

void BM_NonlinearTerm(benchmark::State& state) {
  const spectral::Grid g = grid_for(state);
  const spectral::SpectralField f = spectral::forward_transform(stability::soliton_profile({1.0, 0.0}, g));
  for (auto _ : state) benchmark::DoNotOptimize(solver::nonlinear_term(f));
}
BENCHMARK(BM_NonlinearTerm)->Args({256, 16})->Args({512, 64});

void BM_Step(benchmark::State& state) {
  const spectral::Grid g = grid_for(state);
  solver::SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.moving_frame_speed = 1.0;
  solver::Integrator it(g, cfg);
  spectral::SpectralField f = spectral::forward_transform(stability::soliton_profile({1.0, 0.0}, g));
  for (auto _ : state) {
    it.advance(f);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_Step)->Args({256, 16})->Args({512, 64})->Args({1024, 128});

void BM_OrbitMeter(benchmark::State& state) {
  const spectral::Grid g = grid_for(state);
  const stability::OrbitMeter meter(g, 1.0);
  const spectral::SpectralField f =
      spectral::forward_transform(stability::soliton_profile({1.0, 1.3}, g));
  for (auto _ : state) benchmark::DoNotOptimize(meter(f));
}
BENCHMARK(BM_OrbitMeter)->Args({256, 16})->Args({512, 64});

void BM_OperatorEigensolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const linalg::Matrix a = stability::linearized_operator_matrix(2.5, n, 40.0);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::symmetric_eigen(a, 8));
}
BENCHMARK(BM_OperatorEigensolve)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

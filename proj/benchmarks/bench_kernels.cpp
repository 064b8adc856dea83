#include <benchmark/benchmark.h>

#include "ballheat/ball_spectral.hpp"
#include "ballheat/exact_kernels.hpp"
#include "ballheat/mc_oracle.hpp"
#include "ballheat/specfun.hpp"

using namespace ballheat;

static void BM_BesselJ(benchmark::State& state) {
  const double nu = static_cast<double>(state.range(0));
  double r = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_j(nu, r));
    r = r < 40 ? r + 0.37 : 0.1;
  }
}
BENCHMARK(BM_BesselJ)->Arg(0)->Arg(10)->Arg(80);

static void BM_IntervalKernel(benchmark::State& state) {
  const double t = state.range(0) / 1000.0;
  for (auto _ : state) benchmark::DoNotOptimize(interval_kernel(t, 0.3, -0.7, 1e-14).value);
}
BENCHMARK(BM_IntervalKernel)->Arg(10)->Arg(300)->Arg(2000);

// One kernel value on a warm slice: the per-node cost inside a sweep.
static void BM_SliceKernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double t = state.range(1) / 1000.0;
  BallSpectral<double>::Slice slice(ball_spectral(n), t, 1e-14, SpectralQuantity::kernel);
  slice.radial_profile(0.4);
  slice.radial_profile(0.9);
  double theta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(slice.kernel(0.4, 0.9, theta).value);
    theta = theta < 3.0 ? theta + 0.1 : 0.0;
  }
}
BENCHMARK(BM_SliceKernel)->Args({2, 50})->Args({2, 500})->Args({3, 50})->Args({3, 500});

static void BM_SliceSetup(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double t = state.range(1) / 1000.0;
  ball_spectral(n).plan(t, 1e-14, SpectralQuantity::kernel);
  for (auto _ : state) {
    BallSpectral<double>::Slice slice(ball_spectral(n), t, 1e-14, SpectralQuantity::kernel);
    benchmark::DoNotOptimize(slice.truncation().mode_count);
  }
}
BENCHMARK(BM_SliceSetup)->Args({2, 50})->Args({3, 50})->Unit(benchmark::kMillisecond);

static void BM_McSurvival(benchmark::State& state) {
  PathConfig cfg;
  cfg.n_paths = 10000;
  cfg.threads = 1;
  const Vector x{0.3, 0.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(mc_survival(x, 0.1, cfg).mean);
  state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}
BENCHMARK(BM_McSurvival)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "mwm/gamma.hpp"

using namespace mwm;

namespace {

void adaptive_weak_exponent(benchmark::State& state) {
  const auto sd = SpectralDensity::ohmic(0.1, 8.0);
  double t = 0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_weak(sd, 10.0, {-1, 1, -1}, 0.0, 0.1, 0.2, t));
    t += 1e-6;  // defeat any caching
  }
}
BENCHMARK(adaptive_weak_exponent)->Unit(benchmark::kMicrosecond);

void grid_weak_exponent(benchmark::State& state) {
  const auto sd = SpectralDensity::ohmic(0.1, 8.0);
  const GammaGrid grid(sd, 10.0, 2.0, QuadConfig{});
  const auto plan = grid.plan({-1, 1, -1}, 0.0, 0.1, 0.2);
  double t = 0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan.gamma(t));
    t = t < 1.8 ? t + 1e-4 : 0.4;
  }
}
BENCHMARK(grid_weak_exponent)->Unit(benchmark::kMicrosecond);

void grid_construction(benchmark::State& state) {
  const auto sd = SpectralDensity::gaussian_ohmic(0.1, 8.0, 0.05, 13.0, 4.0);
  for (auto _ : state) {
    const GammaGrid grid(sd, 10.0, 2.0, QuadConfig{});
    benchmark::DoNotOptimize(&grid);
  }
}
BENCHMARK(grid_construction)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

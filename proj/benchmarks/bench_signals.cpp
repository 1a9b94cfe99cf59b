#include <benchmark/benchmark.h>

#include "mwm/signals.hpp"

using namespace mwm;

namespace {

constexpr double kPi = 3.14159265358979323846;

void integrated_six_wave(benchmark::State& state) {
  const auto sd = SpectralDensity::ohmic(0.1, 8.0);
  const EnsembleSpec ens{5.0};
  const auto seq = PulseSequence::weak_three({0.0, 0.1, 0.2}, {kPi / 2, kPi / 2, kPi / 2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrated_intensity(seq, sd, 10.0, ens, WeakSignal::SixWave));
  }
}
BENCHMARK(integrated_six_wave)->Unit(benchmark::kMillisecond);

void sweep_point_pair(benchmark::State& state) {
  const auto sd = SpectralDensity::ohmic(0.1, 4.0);
  const EnsembleSpec ens{5.0};
  const auto seq = PulseSequence::weak_three({0.0, 0.1, 0.2}, {kPi / 2, kPi / 2, kPi / 2});
  const std::vector<double> grid{0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_t1(seq, sd, 100.0, ens, grid, 0.2, QuadConfig{}, 1));
  }
}
BENCHMARK(sweep_point_pair)->Unit(benchmark::kMillisecond);

} // namespace

#include <benchmark/benchmark.h>

#include "mwm/oracle.hpp"
#include "mwm/units.hpp"

using namespace mwm;

namespace {

constexpr double kPi = 3.14159265358979323846;

void oracle_three_pulse_run(benchmark::State& state) {
  const double w = energy_to_angfreq(8.0);
  const int n_cut = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ThermalOracle oracle(w, 0.35 * w, 100.0, n_cut);
    for (int m = 0; m < 3; ++m) {
      oracle.apply_pulse(kPi / 2, 0.3 * m);
      oracle.evolve_free(0.1);
    }
    benchmark::DoNotOptimize(oracle.polarization());
  }
}
BENCHMARK(oracle_three_pulse_run)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

} // namespace

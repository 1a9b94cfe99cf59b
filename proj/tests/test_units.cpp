#include <doctest.h>

#include <cmath>

#include "mwm/units.hpp"

using namespace mwm;

namespace {

// Library-free coth via the Lambert continued fraction for tanh.
double coth_cf(double x) {
  double cf = 2.0 * 24.0 + 1.0;  // deep enough for x ~ O(1)
  for (int k = 24; k >= 1; --k) cf = (2.0 * k - 1.0) + x * x / cf;
  // cf is now the continued fraction starting at 1: tanh = x / cf
  return cf / x;
}

} // namespace

TEST_SUITE_BEGIN("fast");

TEST_CASE("energy_to_angfreq basics") {
  CHECK(energy_to_angfreq(0.0) == 0.0);
  CHECK(energy_to_angfreq(0.6582119569) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(energy_to_angfreq(8.0) == doctest::Approx(12.154139583969019).epsilon(1e-14));
  CHECK(angfreq_to_energy(energy_to_angfreq(3.7)) == doctest::Approx(3.7).epsilon(1e-15));
}

TEST_CASE("energy_to_angfreq is linear") {
  for (double a : {-3.0, 0.5, 2.0, 117.0}) {
    for (double e : {0.1, 1.0, 8.0, 42.0}) {
      CHECK(energy_to_angfreq(a * e) == doctest::Approx(a * energy_to_angfreq(e)).epsilon(1e-14));
    }
  }
}

TEST_CASE("coth_thermal limits and frozen values") {
  CHECK(coth_thermal(1.0, 0.0) == 1.0);
  CHECK(coth_thermal(123.0, 0.0) == 1.0);

  // argument exactly 1: E = 2 kB T
  const double t = 10.0;
  const double e = 2.0 * kPhys.kb * t;
  CHECK(coth_thermal(e, t) == doctest::Approx(1.3130352854993313).epsilon(1e-14));
  CHECK(coth_thermal(e, t) == doctest::Approx(coth_cf(1.0)).epsilon(1e-12));

  CHECK(coth_thermal(8.0, 10.0) == doctest::Approx(1.0001858864828330).epsilon(1e-14));
}

TEST_CASE("coth_thermal domain errors") {
  CHECK_THROWS_AS(coth_thermal(0.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(coth_thermal(-1.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(coth_thermal(1.0, -1.0), std::domain_error);
}

TEST_CASE("coth_thermal monotone decreasing in E, >= 1") {
  const double t = 25.0;
  double prev = coth_thermal(1e-6, t);
  for (double e = 0.01; e < 40.0; e *= 1.7) {
    const double v = coth_thermal(e, t);
    CHECK(v >= 1.0);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_SUITE_END();

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mwm/kernels.hpp"
#include "mwm/spectral.hpp"
#include "mwm/units.hpp"

using namespace mwm;

namespace {

constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;

// Brute-force complex oracle, written independently of the implementation.
cplx oracle_a(double w, double ta, double tb) {
  return std::exp(cplx(0, w * ta)) - std::exp(cplx(0, w * tb));
}

double oracle_filter_weak(double w, int c2, int c1, int c0, double t0, double t1, double t2,
                          double t) {
  const cplx v = double(c2) * oracle_a(w, t2, t) + double(c1) * oracle_a(w, t1, t2) +
                 double(c0) * oracle_a(w, t0, t1);
  return std::abs(v) * std::abs(v);
}

} // namespace

TEST_SUITE_BEGIN("fast");

TEST_CASE("interval phase factor") {
  CHECK(std::abs(interval_phase(1.7, 0.4, 0.4)) == 0.0);
  // half period: 1 - e^{i pi} = 2
  CHECK(interval_phase(kPi, 0.0, 1.0).real() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(interval_phase(kPi, 0.0, 1.0).imag() == doctest::Approx(0.0).epsilon(1e-14));
  // |a|^2 = 2(1 - cos(w tau))
  CHECK(std::norm(interval_phase(1.0, 0.0, 1.0)) ==
        doctest::Approx(0.9193953882637206).epsilon(1e-14));
}

TEST_CASE("filter_pi closed cases") {
  const std::vector<double> t0_only{0.0};
  // M = 0 reduces to 2(1 - cos(w(t - t0)))
  for (double w : {0.3, 1.0, 4.5}) {
    for (double t : {0.1, 0.9, 2.7}) {
      CHECK(filter_pi(w, t0_only, t) ==
            doctest::Approx(2.0 * (1.0 - std::cos(w * t))).epsilon(1e-12));
    }
  }
  CHECK(filter_pi(2.2, t0_only, 0.0) == doctest::Approx(0.0));

  // M = 1 with w t0 = 0, w t1 = pi, w t = 2 pi: |2 - (-2)|^2 = 16
  const std::vector<double> times{0.0, kPi};
  CHECK(filter_pi(1.0, times, 2.0 * kPi) == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("filter_pi pairwise cancellation at w tau = 2 pi") {
  // equal intervals tau with a full period per interval: perfect recoherence
  const double tau = 0.7;
  const double w = 2.0 * kPi / tau;
  const std::vector<double> times{0.0, tau};
  CHECK(filter_pi(w, times, 2.0 * tau) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("filter_weak equals filter_pi at matching signatures") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ud(0.05, 0.4);
  for (int trial = 0; trial < 50; ++trial) {
    const double t0 = 0.0;
    const double t1 = t0 + ud(rng);
    const double t2 = t1 + ud(rng);
    const double t = t2 + ud(rng);
    const double w = 20.0 * ud(rng);

    // (-,+,-) is the two-pulse train filter
    const std::vector<double> times{t0, t1, t2};
    CHECK(filter_weak(w, {-1, 1, -1}, t0, t1, t2, t) ==
          doctest::Approx(filter_pi(w, times, t)).epsilon(1e-12));

    // (-,-,-) telescopes to free induction over [t0, t]
    const std::vector<double> t0_only{t0};
    CHECK(filter_weak(w, {-1, -1, -1}, t0, t1, t2, t) ==
          doctest::Approx(filter_pi(w, t0_only, t)).epsilon(1e-12));

    // against the brute-force oracle for a mixed signature
    CHECK(filter_weak(w, {-1, 1, 1}, t0, t1, t2, t) ==
          doctest::Approx(oracle_filter_weak(w, -1, 1, 1, t0, t1, t2, t)).epsilon(1e-12));
  }
}

TEST_CASE("filter_weak degenerate and example values") {
  CHECK(filter_weak(1.0, {-1, 0, 0}, 0.0, 0.1, 0.2, 0.2) == doctest::Approx(0.0));
  const double v = filter_weak(1.0, {-1, 1, 1}, 0.0, 0.1, 0.2, 0.4);
  CHECK(v == doctest::Approx(oracle_filter_weak(1.0, -1, 1, 1, 0.0, 0.1, 0.2, 0.4))
                 .epsilon(1e-14));
}

TEST_CASE("phase bilinears against the complex oracle") {
  const double t0 = 0.0, t1 = 0.1, t2 = 0.2, t = 0.4;
  for (double w : {0.5, 1.0, 9.0}) {
    const cplx a2 = oracle_a(w, t2, t), a1 = oracle_a(w, t1, t2), a0 = oracle_a(w, t0, t1);
    CHECK(phase_bilinear_im(w, PhaseKind::MM0, t0, t1, t2, t) ==
          doctest::Approx(std::imag((a2 + a1) * std::conj(a0))).epsilon(1e-13));
    CHECK(phase_bilinear_im(w, PhaseKind::MP0, t0, t1, t2, t) ==
          doctest::Approx(std::imag((a2 - a1) * std::conj(a0))).epsilon(1e-13));
    CHECK(phase_bilinear_im(w, PhaseKind::M00Plus, t0, t1, t2, t) ==
          doctest::Approx(std::imag(a2 * std::conj(a1 + a0))).epsilon(1e-13));
    CHECK(phase_bilinear_im(w, PhaseKind::M00Minus, t0, t1, t2, t) ==
          doctest::Approx(std::imag(a2 * std::conj(a1 - a0))).epsilon(1e-13));
    CHECK(phase_bilinear_im(w, PhaseKind::M0X, t0, t1, t2, t) ==
          doctest::Approx(std::imag(a2 * std::conj(a1))).epsilon(1e-13));
  }
}

TEST_CASE("sign flip of the middle interval swaps MM0 and MP0") {
  // Im{[a2 - a1] a0*} = Im{[a2 + (-a1)] a0*}: linearity in a1
  const double t0 = 0.0, t1 = 0.13, t2 = 0.31, t = 0.55, w = 3.3;
  const cplx a2 = oracle_a(w, t2, t), a1 = oracle_a(w, t1, t2), a0 = oracle_a(w, t0, t1);
  CHECK(phase_bilinear_im(w, PhaseKind::MP0, t0, t1, t2, t) ==
        doctest::Approx(std::imag((a2 + (-a1)) * std::conj(a0))).epsilon(1e-13));
  CHECK(phase_bilinear_im(w, PhaseKind::MM0, t0, t1, t2, t) +
            phase_bilinear_im(w, PhaseKind::MP0, t0, t1, t2, t) ==
        doctest::Approx(2.0 * std::imag(a2 * std::conj(a0))).epsilon(1e-13));
}

TEST_CASE("kernels are invariant under global time translation") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> ud(0.05, 0.5);
  for (int trial = 0; trial < 30; ++trial) {
    const double t0 = 0.0, t1 = t0 + ud(rng), t2 = t1 + ud(rng), t = t2 + ud(rng);
    const double s = 10.0 * ud(rng);
    const double w = 15.0 * ud(rng);
    CHECK(filter_weak(w, {-1, 1, -1}, t0, t1, t2, t) ==
          doctest::Approx(filter_weak(w, {-1, 1, -1}, t0 + s, t1 + s, t2 + s, t + s))
              .epsilon(1e-10));
    CHECK(phase_bilinear_im(w, PhaseKind::MM0, t0, t1, t2, t) ==
          doctest::Approx(phase_bilinear_im(w, PhaseKind::MM0, t0 + s, t1 + s, t2 + s, t + s))
              .epsilon(1e-9));
  }
}

TEST_CASE("small-omega series branches match direct evaluation") {
  const double t0 = 0.0, t1 = 0.11, t2 = 0.23, t = 0.48;
  const std::vector<double> times{t0, t1, t2};
  for (double w : {1e-3, 3e-3, 1e-2}) {
    CHECK(filter_weak_over_w2_small(w, {-1, 1, 1}, t0, t1, t2, t) ==
          doctest::Approx(filter_weak(w, {-1, 1, 1}, t0, t1, t2, t) / (w * w)).epsilon(1e-7));
    CHECK(filter_pi_over_w2_small(w, times, t) ==
          doctest::Approx(filter_pi(w, times, t) / (w * w)).epsilon(1e-7));
    CHECK(phase_bilinear_im_over_w2_small(w, PhaseKind::MM0, t0, t1, t2, t) ==
          doctest::Approx(phase_bilinear_im(w, PhaseKind::MM0, t0, t1, t2, t) / (w * w))
              .epsilon(1e-5));
  }
}

TEST_CASE("theta_phase global phase") {
  const auto sd = SpectralDensity::ohmic(0.1, 8.0);
  CHECK(theta_phase(sd, 0.3, 0.3) == 0.0);
  CHECK(theta_phase(sd, 0.0, 0.3) == doctest::Approx(0.23431189901919977).epsilon(1e-8));

  // single-mode closed form
  const auto sm = SpectralDensity::single_mode(0.5, 13.0);
  const double w = energy_to_angfreq(13.0);
  const double tau = 0.21;
  CHECK(theta_phase(sm, 0.0, tau) ==
        doctest::Approx(0.5 / 169.0 * (w * tau - std::sin(w * tau))).epsilon(1e-13));

  // nondecreasing in tau
  double prev = 0.0;
  for (double tau2 = 0.05; tau2 < 1.0; tau2 += 0.05) {
    const double v = theta_phase(sd, 0.0, tau2);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_SUITE_END();

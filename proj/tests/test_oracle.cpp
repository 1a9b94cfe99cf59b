#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>

#include "mwm/errors.hpp"
#include "mwm/gamma.hpp"
#include "mwm/oracle.hpp"
#include "mwm/signals.hpp"
#include "mwm/units.hpp"

using namespace mwm;

namespace {

constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;

// meV-side density matching oracle parameters in rad/ps
SpectralDensity matching_density(double omega_rad_ps, double g_rad_ps) {
  const double g_mev = angfreq_to_energy(g_rad_ps);
  return SpectralDensity::single_mode(g_mev * g_mev, angfreq_to_energy(omega_rad_ps));
}

} // namespace

TEST_SUITE_BEGIN("fast");

TEST_CASE("thermal construction") {
  SUBCASE("zero temperature puts the boson in vacuum") {
    const ThermalOracle oracle(10.0, 2.0, 0.0, 12);
    CHECK(oracle.rho()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(oracle.trace_real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(oracle.mean_occupation() == 0.0);
  }
  SUBCASE("occupation 1 when hbar Omega / kB T = ln 2") {
    const double t = 10.0;
    const double w = std::log(2.0) * kPhys.kb * t / kPhys.hbar;
    const ThermalOracle oracle(w, 0.1 * w, t);
    CHECK(oracle.mean_occupation() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("8 meV mode at 10 K is almost empty") {
    const ThermalOracle oracle(energy_to_angfreq(8.0), 1.0, 10.0);
    CHECK(oracle.mean_occupation() == doctest::Approx(9.294324141648262e-5).epsilon(1e-10));
    CHECK(oracle.n_cut() < 40);
  }
  SUBCASE("insufficient cutoff is rejected") {
    // hot, heavy mode: thermal tail needs many levels
    const double w = energy_to_angfreq(1.0);
    CHECK_THROWS_AS(ThermalOracle(w, 0.1, 300.0, 4), CutoffError);
  }
}

TEST_CASE("pulse action on the qubit") {
  const double w = energy_to_angfreq(8.0);
  SUBCASE("pi pulse inverts populations") {
    ThermalOracle oracle(w, 1.0, 10.0);
    oracle.apply_pulse(kPi, 0.3);
    const int nf = oracle.n_cut() + 1;
    double p_up = 0.0;
    for (int n = 0; n < nf; ++n) p_up += oracle.rho()(nf + n, nf + n).real();
    CHECK(p_up == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("pi/2 pulse makes an equal superposition") {
    ThermalOracle oracle(w, 1.0, 10.0);
    oracle.apply_pulse(kPi / 2, 0.0);
    CHECK(std::abs(oracle.polarization()) == doctest::Approx(0.5).epsilon(1e-12));
    const int nf = oracle.n_cut() + 1;
    double p_up = 0.0;
    for (int n = 0; n < nf; ++n) p_up += oracle.rho()(nf + n, nf + n).real();
    CHECK(p_up == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("2 pi pulse leaves populations unchanged") {
    ThermalOracle oracle(w, 1.0, 10.0);
    oracle.apply_pulse(kPi / 3, 0.1);
    const auto before = oracle.rho().diagonal().eval();
    oracle.apply_pulse(2.0 * kPi, 0.7);
    const auto after = oracle.rho().diagonal().eval();
    CHECK((before - after).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("trace and hermiticity are preserved by every operation") {
  ThermalOracle oracle(energy_to_angfreq(6.0), 3.0, 40.0);
  oracle.apply_pulse(kPi / 2, 0.2);
  oracle.evolve_free(0.13);
  oracle.apply_pulse(kPi / 3, 1.2);
  oracle.evolve_free(0.21);
  CHECK(oracle.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle.hermiticity_defect() < 1e-12);
}

TEST_CASE("thermal displacement identity at n_cut = 60") {
  const double w = energy_to_angfreq(4.0);
  const double g = 0.35 * w;
  const double temp = 40.0;
  const ThermalOracle oracle(w, g, temp, 60);
  const int nf = oracle.n_cut() + 1;

  // populations of the truncated thermal state
  Eigen::VectorXd pops(nf);
  for (int n = 0; n < nf; ++n) pops(n) = oracle.rho()(n, n).real();

  const double dt = 0.2;
  const Eigen::MatrixXcd u = oracle.free_propagator(0.0, dt);
  const Eigen::MatrixXcd d_plus = u.block(nf, nf, nf, nf);  // e^{i Theta} D(alpha)

  cplx tr = 0.0;
  for (int n = 0; n < nf; ++n) tr += d_plus(n, n) * pops(n);

  const cplx alpha = g / w * (1.0 - std::exp(cplx(0, w * dt)));
  const double expected =
      std::exp(-0.5 * std::norm(alpha) * coth_thermal(angfreq_to_energy(w), temp));
  CHECK(std::abs(tr) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("free propagator against a brute-force time-ordered product") {
  // midpoint Trotterization of H(t) = sigma_z (g B^dag e^{i w t} + g B e^{-i w t}),
  // block-diagonal in the qubit: up block exp(-i h hb), down block its adjoint
  const double w = energy_to_angfreq(5.0);
  const double g = 0.3 * w;
  const int nf = 22;
  const ThermalOracle oracle(w, g, 0.0, nf - 1);

  const double t_start = 0.17, dt = 0.31;
  const Eigen::MatrixXcd u_exact = oracle.free_propagator(t_start, dt);

  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(nf, nf);
  for (int n = 0; n < nf - 1; ++n) b(n, n + 1) = std::sqrt(double(n + 1));
  const Eigen::MatrixXcd bdag = b.adjoint();

  const int steps = 4000;
  const double h = dt / steps;
  Eigen::MatrixXcd up = Eigen::MatrixXcd::Identity(nf, nf);
  Eigen::MatrixXcd down = Eigen::MatrixXcd::Identity(nf, nf);
  for (int k = 0; k < steps; ++k) {
    const double t = t_start + (k + 0.5) * h;
    const Eigen::MatrixXcd hb =
        g * (bdag * std::exp(cplx(0, w * t)) + b * std::exp(cplx(0, -w * t)));
    const Eigen::MatrixXcd step = (cplx(0, -h) * hb).exp();
    up = step * up;
    down = step.adjoint() * down;
  }
  // compare the action on low-occupation states; the top of the truncated
  // space is corrupted differently by the two constructions
  for (int n = 0; n <= 4; ++n) {
    CHECK((u_exact.block(0, 0, nf, nf).col(n) - down.col(n)).norm() < 1e-7);
    CHECK((u_exact.block(nf, nf, nf, nf).col(n) - up.col(n)).norm() < 1e-7);
  }
}

TEST_CASE("free decay reproduces the closed-form exponent") {
  const double w = energy_to_angfreq(8.0);
  const double g = 0.4 * w;
  const auto sd = matching_density(w, g);
  for (double temp : {0.0, 10.0, 100.0}) {
    ThermalOracle oracle(w, g, temp);
    oracle.apply_pulse(kPi / 2, 0.0);
    const double gp = single_mode_g_prime(*sd.single_mode(), temp);
    double t = 0.0;
    for (double dt : {0.05, 0.1, 0.22}) {
      oracle.evolve_free(dt);
      t += dt;
      const double gamma_oracle = -std::log(2.0 * std::abs(oracle.polarization()));
      const double gamma_closed = single_mode_gamma_plus(gp, w, 0.0, t);
      CHECK(gamma_oracle == doctest::Approx(gamma_closed).epsilon(1e-8));
    }
  }
}

TEST_CASE("qubit purity recoheres at full reservoir periods") {
  const double w = energy_to_angfreq(8.0);
  ThermalOracle oracle(w, 0.5 * w, 0.0);
  oracle.apply_pulse(kPi / 2, 0.0);
  oracle.evolve_free(2.0 * kPi / w);
  CHECK(oracle.qubit_purity() >= 1.0 - 1e-8);
  oracle.evolve_free(2.0 * kPi / w);
  CHECK(oracle.qubit_purity() >= 1.0 - 1e-8);
  // mid-period the qubit is entangled with the mode
  ThermalOracle mid(w, 0.5 * w, 0.0);
  mid.apply_pulse(kPi / 2, 0.0);
  mid.evolve_free(kPi / w);
  CHECK(mid.qubit_purity() < 1.0 - 1e-3);
}

TEST_CASE("evolution into the cutoff raises an error") {
  const double w = energy_to_angfreq(2.0);
  ThermalOracle oracle(w, 2.5 * w, 0.0, 6);  // strong coupling, tiny space
  oracle.apply_pulse(kPi / 2, 0.0);
  CHECK_THROWS_AS(oracle.evolve_free(kPi / w), CutoffError);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("slow");

TEST_CASE("phase cycling reproduces the nine-term expansion") {
  const double w = energy_to_angfreq(8.0);
  const double g = 0.35 * w;
  const auto sd = matching_density(w, g);
  const std::array<double, 3> times{0.0, 0.1, 0.2};
  const std::array<double, 3> thetas{kPi / 2, kPi / 2, kPi / 2};

  for (double temp : {0.0, 10.0}) {
    for (double t : {0.3, 0.45}) {
      const auto cycle = phase_cycled_amplitudes(w, g, temp, times, t, thetas);
      CHECK(cycle.completeness_residual < 1e-8);

      const auto seq = PulseSequence::weak_three(times, thetas);
      const auto analytic = weak_polarization_terms(seq, sd, temp, EnsembleSpec{}, t);
      for (std::size_t k = 0; k < analytic.size(); ++k) {
        const double rel = std::abs(cycle.amplitudes[k] - analytic[k].second) /
                           std::max(std::abs(analytic[k].second), 1e-12);
        INFO("order ", analytic[k].first.label(), " T=", temp, " t=", t);
        CHECK(rel < 1e-6);
      }
    }
  }
}

TEST_CASE("phase cycling with uneven areas still matches") {
  const double w = energy_to_angfreq(10.0);
  const double g = 0.3 * w;
  const auto sd = matching_density(w, g);
  const std::array<double, 3> times{0.0, 0.08, 0.21};
  const std::array<double, 3> thetas{0.4 * kPi, 0.7 * kPi, 0.33 * kPi};
  const double t = 0.37;

  const auto cycle = phase_cycled_amplitudes(w, g, 25.0, times, t, thetas);
  const auto seq = PulseSequence::weak_three(times, thetas);
  const auto analytic = weak_polarization_terms(seq, sd, 25.0, EnsembleSpec{}, t);
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    const double rel = std::abs(cycle.amplitudes[k] - analytic[k].second) /
                       std::max(std::abs(analytic[k].second), 1e-12);
    INFO("order ", analytic[k].first.label());
    CHECK(rel < 1e-6);
  }
}

TEST_SUITE_END();

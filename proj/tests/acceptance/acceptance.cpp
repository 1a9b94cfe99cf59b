// acceptance.cpp — end-to-end acceptance suite
//
// One test case per criterion; each prints a single PASS/FAIL line so the
// suite doubles as a checklist. Run via ctest (target `acceptance`) or
// directly: ./mwm_acceptance
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "mwm/csv.hpp"
#include "mwm/errors.hpp"
#include "mwm/fit.hpp"
#include "mwm/gamma.hpp"
#include "mwm/oracle.hpp"
#include "mwm/parallel.hpp"
#include "mwm/signals.hpp"
#include "mwm/units.hpp"

using namespace mwm;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Criterion {
  const char* name;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  bool ok = true;

  void note(bool pass) { ok = ok && pass; }
  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s (%.1f s)\n", ok ? "PASS" : "FAIL", name, secs);
    std::fflush(stdout);
  }
};

} // namespace

TEST_CASE("criterion 1: ohmic T=0 free decay matches the closed form") {
  Criterion c{"1 closed-form ohmic T=0 free decay"};
  const auto sd = SpectralDensity::ohmic(0.1, 8.0);
  const double wc = energy_to_angfreq(8.0);
  const std::vector<double> times{0.0};
  for (int i = 0; i < 50; ++i) {
    const double tau = 0.01 + (2.0 - 0.01) * i / 49.0;
    const double expected = 2.0 * 0.1 * std::log(1.0 + wc * wc * tau * tau);
    const double got = gamma_pi(sd, 0.0, times, tau);
    const bool pass = std::abs(got - expected) <= 1e-6 * std::abs(expected);
    c.note(pass);
    CHECK(pass);
  }
}

TEST_CASE("criterion 2: single-mode analytic suite") {
  Criterion c{"2 single-mode analytic suite"};
  const auto sd = SpectralDensity::single_mode(0.8, 13.0);
  const double w = energy_to_angfreq(13.0);
  const double gp = single_mode_g_prime(*sd.single_mode(), 10.0);

  // numerical Gamma against g' f+ and g' f-
  for (double t : {0.05, 0.21, 0.4, 0.77}) {
    const std::vector<double> fid{0.0};
    const double plus = gamma_pi(sd, 10.0, fid, t);
    c.note(std::abs(plus - single_mode_gamma_plus(gp, w, 0.0, t)) < 1e-10);
    CHECK(c.ok);
  }
  const double d0 = 0.04;
  for (double t : {0.05, 0.21, 0.4, 0.77}) {
    const std::vector<double> train{0.0, d0};
    const double minus = gamma_pi(sd, 10.0, train, t);
    c.note(std::abs(minus - single_mode_gamma_minus(gp, w, 0.0, d0, t)) < 1e-10);
    CHECK(c.ok);
  }

  // half-period spacing: Gamma_- = g'(6 cos(w(t-t0)) + 10) >= Gamma_+
  const double d0_pi = kPi / w;
  for (int i = 0; i <= 1000; ++i) {
    const double t = d0_pi + (2.0 * kPi / w) * i / 1000.0;
    const double minus = single_mode_gamma_minus(gp, w, 0.0, d0_pi, t);
    c.note(std::abs(minus - gp * (6.0 * std::cos(w * t) + 10.0)) < 1e-10 * 16.0 * gp);
    c.note(minus >= single_mode_gamma_plus(gp, w, 0.0, t) - 1e-9);
  }
  CHECK(c.ok);
}

TEST_CASE("criterion 3: phase-cycled oracle reproduces all nine amplitudes") {
  Criterion c{"3 oracle equivalence (capstone)"};
  const double w = energy_to_angfreq(8.0);
  const double g = 0.35 * w;
  const double g_mev = angfreq_to_energy(g);
  const auto sd = SpectralDensity::single_mode(g_mev * g_mev, 8.0);

  const std::array<double, 3> times{0.0, 0.1, 0.2};
  const std::array<double, 3> thetas{kPi / 2, kPi / 2, kPi / 2};
  const std::array<double, 2> obs{0.3, 0.4};

  for (double temp : {0.0, 10.0, 100.0}) {
    for (double t : obs) {
      const auto cycle = phase_cycled_amplitudes(w, g, temp, times, t, thetas, 40);
      c.note(cycle.completeness_residual < 1e-8);
      const auto seq = PulseSequence::weak_three(times, thetas);
      const auto analytic = weak_polarization_terms(seq, sd, temp, EnsembleSpec{}, t);
      for (std::size_t k = 0; k < analytic.size(); ++k) {
        const double rel = std::abs(cycle.amplitudes[k] - analytic[k].second) /
                           std::max(std::abs(analytic[k].second), 1e-12);
        INFO("T=", temp, " t=", t, " order ", analytic[k].first.label(), " rel=", rel);
        const bool pass = rel < 1e-6;
        c.note(pass);
        CHECK(pass);
      }
    }
  }
}

TEST_CASE("criterion 4: ideal-pi six-wave signal equals the M=2 train") {
  Criterion c{"4 ideal-pi consistency"};
  const auto sd = SpectralDensity::ohmic(0.1, 8.0);
  const auto train = PulseSequence::pi_train(0.0, {0.2, 0.4}, kPi / 2);
  const auto seq = PulseSequence::weak_three({0.0, 0.2, 0.4}, {kPi / 2, kPi, kPi});
  for (const EnsembleSpec ens : {EnsembleSpec{0.0}, EnsembleSpec{5.0}}) {
    for (double t = 0.4; t <= 1.2; t += 0.02) {
      const double a = intensity_weak(seq, sd, 10.0, ens, WeakSignal::SixWave, t);
      const double b = intensity_pi_train(train, sd, 10.0, ens, t);
      const bool pass = std::abs(a - b) <= 1e-6 * std::max({std::abs(b), 1e-12});
      c.note(pass);
      CHECK(pass);
    }
  }
}

TEST_CASE("criterion 5: echo maxima sit at the rephasing times on a 1 fs grid") {
  Criterion c{"5 echo timing"};
  const auto sd = SpectralDensity::ohmic(0.1, 8.0);
  const EnsembleSpec ens{5.0};
  const std::array<std::pair<double, double>, 2> timings{{{0.1, 0.2}, {0.2, 0.6}}};

  for (const auto& [t1, t2] : timings) {
    const auto seq = PulseSequence::weak_three({0.0, t1, t2}, {kPi / 2, kPi / 2, kPi / 2});
    const GammaGrid grid(sd, 10.0, 2.0 * t2 + 1.0, QuadConfig{});
    for (WeakSignal which : {WeakSignal::SixWave, WeakSignal::FourWave}) {
      const std::size_t idx = which == WeakSignal::SixWave ? kSixWaveIndex : kFourWaveIndex;
      const double te = echo_time(seq, enumerate_weak_orders()[idx].order).t_ps;

      const double lo = std::max(t2, te - 0.15);
      const double hi = te + 0.15;
      const std::size_t n = static_cast<std::size_t>(std::round((hi - lo) / 1e-3)) + 1;
      std::vector<double> curve(n);
      parallel_for(n, 2, [&](std::size_t i) {
        curve[i] = intensity_weak(seq, ens, which, grid, lo + 1e-3 * double(i));
      });
      const std::size_t arg =
          std::max_element(curve.begin(), curve.end()) - curve.begin();
      const double t_star = lo + 1e-3 * double(arg);
      INFO("t1=", t1, " t2=", t2, " order ", enumerate_weak_orders()[idx].order.label(),
           " argmax=", t_star, " expected=", te);
      const bool pass = std::abs(t_star - te) <= 1e-3 + 1e-12;
      c.note(pass);
      CHECK(pass);
    }
  }
}

TEST_CASE("criterion 6: pi trains accelerate the ohmic decay at 0.2 ps spacing") {
  Criterion c{"6 acceleration regime"};
  const auto sd = SpectralDensity::ohmic(0.1, 8.0);
  const EnsembleSpec ens{};
  const auto fid = PulseSequence::pi_train(0.0, {}, kPi / 2);
  const GammaGrid grid(sd, 10.0, 3.6, QuadConfig{});
  const double fid_times[1] = {0.0};

  for (int m : {1, 3, 5}) {
    const auto train = PulseSequence::pi_train_uniform(0.0, m, 0.2, kPi / 2);
    const std::vector<double> times = train.times();
    for (double t = train.t_last() + 1e-3; t <= 3.0; t += 0.004) {
      const double g_train = grid.gamma_pi(times, t);
      const double g_fid = grid.gamma_pi(std::span<const double>(fid_times, 1), t);
      // intensity comparison: larger exponent = weaker signal
      const bool pass = g_train >= g_fid - 1e-9;
      c.note(pass);
      if (!pass) {
        INFO("M=", m, " t=", t, " train=", g_train, " fid=", g_fid);
        CHECK(pass);
      }
    }
  }
  CHECK(c.ok);
}

TEST_CASE("criterion 7: inhomogeneous gaussian-ohmic sweep crosses over") {
  Criterion c{"7 crossover"};
  const auto sd = SpectralDensity::gaussian_ohmic(0.1, 8.0, 0.05, 13.0, 4.0);
  const EnsembleSpec ens{5.0};
  const double t2 = 0.6;
  const auto seq = PulseSequence::weak_three({0.0, 0.1, t2}, {kPi / 2, kPi / 2, kPi / 2});

  std::vector<double> grid;
  for (double t1 = 0.03; t1 < t2 - 0.02; t1 += 0.03) grid.push_back(t1);
  const auto [four, six] = sweep_t1(seq, sd, 10.0, ens, grid, t2, QuadConfig{}, 2);

  // difference must go from negative (acceleration) to positive (suppression)
  std::vector<double> diff(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    diff[i] = six.samples[i].second - four.samples[i].second;
  const bool starts_negative = diff.front() < 0.0;
  bool crossed = false;
  bool ends_positive = false;
  for (std::size_t i = 1; i < diff.size(); ++i) {
    if (diff[i - 1] < 0.0 && diff[i] > 0.0) crossed = true;
    if (diff[i] > 0.0) ends_positive = true;
  }
  INFO("diff front=", diff.front(), " back=", diff.back());
  c.note(starts_negative);
  c.note(crossed);
  c.note(ends_positive);
  CHECK(starts_negative);
  CHECK(crossed);
  CHECK(ends_positive);
}

TEST_CASE("criterion 8: fit round trip, noiseless and under 1% noise") {
  Criterion c{"8 fit round trip"};
  const double alpha_true = 0.1, omega_c_true = 8.0;

  FitProblem base;
  base.base = SpectralDensity::ohmic(alpha_true, omega_c_true);
  base.temperature_k = 10.0;
  base.ensemble.delta_b_mev = 5.0;
  base.sequence = PulseSequence::weak_three({0.0, 0.1, 0.2}, {kPi / 2, kPi / 2, kPi / 2});
  base.free_params = {{FitParam::Alpha, 0.05, 0.02, 0.3}, {FitParam::OmegaC, 5.0, 3.0, 16.0}};
  base.jobs = 2;

  std::vector<double> t1;
  for (int i = 1; i <= 8; ++i) t1.push_back(0.2 * i / 9.0);
  for (WeakSignal which : {WeakSignal::FourWave, WeakSignal::SixWave}) {
    FitDataset ds;
    ds.order = which;
    ds.kind = CurveKind::IntegratedVsT1;
    for (double x : t1) ds.samples.emplace_back(x, 0.0);
    base.datasets.push_back(std::move(ds));
  }
  const std::vector<double> truth = residuals(base, {alpha_true, omega_c_true});
  std::size_t idx = 0;
  std::vector<double> clean;
  for (auto& ds : base.datasets)
    for (auto& [x, y] : ds.samples) {
      y = truth[idx++];
      clean.push_back(y);
    }

  // noiseless round trip to 1%
  {
    FitProblem p = base;
    p.starts = 8;
    const FitResult r = solve(p);
    const double ea = std::abs(r.estimates[0] - alpha_true) / alpha_true;
    const double ew = std::abs(r.estimates[1] - omega_c_true) / omega_c_true;
    INFO("noiseless estimates ", r.estimates[0], " ", r.estimates[1]);
    c.note(r.converged && ea < 0.01 && ew < 0.01);
    CHECK(c.ok);
  }

  // 100 noisy trials at 1% relative noise: median recovery within 5%
  const int trials = 100;
  std::vector<double> err_alpha(trials), err_wc(trials);
  parallel_for(trials, 2, [&](std::size_t trial) {
    std::mt19937_64 rng(1234 + trial);
    std::normal_distribution<double> noise(0.0, 0.01);
    FitProblem p = base;
    p.starts = 1;  // estimator statistics, not global search
    p.jobs = 1;
    std::size_t j = 0;
    for (auto& ds : p.datasets)
      for (auto& [x, y] : ds.samples) {
        y = clean[j++] * (1.0 + noise(rng));
      }
    try {
      const FitResult r = solve(p);
      err_alpha[trial] = std::abs(r.estimates[0] - alpha_true) / alpha_true;
      err_wc[trial] = std::abs(r.estimates[1] - omega_c_true) / omega_c_true;
    } catch (const NumericError&) {
      err_alpha[trial] = 1.0;
      err_wc[trial] = 1.0;
    }
  });
  std::sort(err_alpha.begin(), err_alpha.end());
  std::sort(err_wc.begin(), err_wc.end());
  INFO("median errors ", err_alpha[trials / 2], " ", err_wc[trials / 2]);
  const bool noisy_ok = err_alpha[trials / 2] < 0.05 && err_wc[trials / 2] < 0.05;
  c.note(noisy_ok);
  CHECK(noisy_ok);
}

TEST_CASE("criterion 9: sweep output is byte-identical across jobs counts") {
  Criterion c{"9 determinism"};
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(std::string(MWM_TEST_TMP) + "_acc_det");
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "run.cfg");
    os << "[reservoir]\ntype = ohmic\nalpha = 0.1\nomega_c_mev = 4\n"
          "[ensemble]\ntemperature_k = 100\ndelta_b_mev = 5\n"
          "[pulses]\nmode = weak_three_pulse\nt0_ps = 0\nt1_ps = 0.1\nt2_ps = 0.2\n"
          "[grid]\nt1_list_ps = 0.02:0.02:0.18\n"
          "[output]\nprefix = acc\n";
  }
  const std::string bin = MWM_BIN_PATH;
  const auto run = [&](const std::string& args) {
    const std::string cmd = bin + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  const std::string cfg = (dir / "run.cfg").string();
  c.note(run("sweep --config " + cfg + " --jobs 1 --out " + (dir / "o1").string()) == 0);
  c.note(run("sweep --config " + cfg + " --jobs 8 --out " + (dir / "o8").string()) == 0);

  const auto slurp = [](const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  };
  const std::string a = slurp(dir / "o1" / "acc_sweep_T100.csv");
  const std::string b = slurp(dir / "o8" / "acc_sweep_T100.csv");
  c.note(!a.empty());
  c.note(a == b);
  CHECK(!a.empty());
  CHECK(a == b);
}

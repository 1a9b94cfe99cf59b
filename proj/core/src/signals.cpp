// signals.cpp
#include "mwm/signals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "mwm/errors.hpp"
#include "mwm/parallel.hpp"

namespace mwm {
namespace {

using cplx = std::complex<double>;

constexpr double kGk15X[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kGk15W[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kG7W[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                            0.417959183673469, 0.381830050505119, 0.279705391489277,
                            0.129484966168870};

struct ThetaFactors {
  double sin0, sin1, sin2;
  double c0h2, s0h2, c1h2, s1h2, c2h2, s2h2;  // cos^2/sin^2 of half areas
};

ThetaFactors theta_factors(const PulseSequence& seq) {
  const double th0 = seq.pulse(0).theta_rad;
  const double th1 = seq.pulse(1).theta_rad;
  const double th2 = seq.pulse(2).theta_rad;
  const auto sq = [](double x) { return x * x; };
  return {std::sin(th0),          std::sin(th1),          std::sin(th2),
          sq(std::cos(th0 / 2)),  sq(std::sin(th0 / 2)),  sq(std::cos(th1 / 2)),
          sq(std::sin(th1 / 2)),  sq(std::cos(th2 / 2)),  sq(std::sin(th2 / 2))};
}

void require_weak(const PulseSequence& seq) {
  if (seq.mode() != SequenceMode::WeakThreePulse)
    throw std::invalid_argument("signals: a weak three-pulse sequence is required");
}

double weak_prefactor(const PulseSequence& seq, WeakSignal which) {
  const ThetaFactors f = theta_factors(seq);
  const double theta1_part = which == WeakSignal::FourWave ? f.c1h2 * f.c1h2 : f.s1h2 * f.s1h2;
  return 0.25 * f.sin0 * f.sin0 * theta1_part * f.s2h2 * f.s2h2;
}

Coeffs3 weak_signature(WeakSignal which) {
  return which == WeakSignal::FourWave ? Coeffs3{-1, +1, +1} : Coeffs3{-1, +1, -1};
}

/// Detuning time argument of the tracked order at observation time t.
double weak_tau(const PulseSequence& seq, WeakSignal which, double t) {
  const double d0 = seq.interval(0), d1 = seq.interval(1);
  return which == WeakSignal::FourWave ? t - seq.pulse(2).t_ps - d1 - d0
                                       : t - seq.pulse(2).t_ps - d1 + d0;
}

// Time marching with embedded G7/K15 panels and local bisection. Integrates
// `f` from a, stopping either at the fixed upper limit or, in auto mode, once
// five consecutive panels stay below 1e-12 of the running peak.
struct MarchResult {
  double integral = 0.0;
  double peak = 0.0;
};

MarchResult march_time_integral(const std::function<double(double)>& f, double t_lo,
                                double t_upper, bool auto_window, double panel_ps,
                                const QuadConfig& qc) {
  constexpr double kFloor = 1e-12;  // of the running peak
  constexpr int kQuietPanelsToStop = 5;
  const double hard_cap = auto_window ? t_lo + 64.0 : t_upper;

  MarchResult out;
  int quiet = 0;

  struct Seg {
    double a, b;
    int depth;
  };

  double a = t_lo;
  while (a < hard_cap - 1e-15) {
    const double b = std::min(a + panel_ps, hard_cap);
    double panel_sum = 0.0;
    double panel_peak = 0.0;

    std::vector<Seg> stack{{a, b, 0}};
    while (!stack.empty()) {
      const Seg seg = stack.back();
      stack.pop_back();
      const double h = 0.5 * (seg.b - seg.a);
      const double mid = 0.5 * (seg.a + seg.b);
      double gk = 0.0, g = 0.0;
      double local_max = 0.0;
      for (int i = 0; i < 15; ++i) {
        const double y = f(mid + h * kGk15X[i]);
        local_max = std::max(local_max, std::abs(y));
        gk += kGk15W[i] * y;
        if (i % 2 == 1) g += kG7W[i / 2] * y;
      }
      const double err = std::abs(gk - g) * h;
      const double scale = std::max({std::abs(out.integral), std::abs(gk * h), 1e-300});
      if (err > std::max(qc.abs_tol, 0.1 * qc.rel_tol * scale) && seg.depth < 12) {
        stack.push_back({seg.a, mid, seg.depth + 1});
        stack.push_back({mid, seg.b, seg.depth + 1});
      } else {
        panel_sum += gk * h;
        panel_peak = std::max(panel_peak, local_max);
      }
    }

    out.integral += panel_sum;
    out.peak = std::max(out.peak, panel_peak);
    a = b;

    if (auto_window) {
      if (out.peak > 0.0 && panel_peak < kFloor * out.peak) {
        if (++quiet >= kQuietPanelsToStop) return out;
      } else {
        quiet = 0;
      }
    }
  }
  if (auto_window) {
    throw NumericError("integrated_intensity: signal did not fall below threshold within the "
                       "integration cap",
                       out.integral, out.peak * kFloor);
  }
  return out;
}

double envelope_exponent(double tau, double delta_rad_ps) {
  const double x = tau * delta_rad_ps;
  return x * x;
}

} // namespace

double intensity_pi_train(const PulseSequence& seq, const SpectralDensity& sd, double temp_k,
                          const EnsembleSpec& ens, double t, const QuadConfig& qc) {
  if (seq.mode() != SequenceMode::PiTrain)
    throw std::invalid_argument("intensity_pi_train: requires a pi-train sequence");
  if (t < seq.t_last())
    throw std::invalid_argument("intensity_pi_train: t must be >= the last pulse time");

  const std::vector<double> times = seq.times();
  const double gamma = gamma_pi(sd, temp_k, times, t, qc);

  const int m = seq.control_count();
  double alt = 0.0, sign = 1.0;
  for (int i = 0; i < m; ++i, sign = -sign) alt += sign * seq.interval(static_cast<std::size_t>(i));
  const double parity = (m % 2 == 0) ? 1.0 : -1.0;
  const double tau = (t - seq.t_last()) + parity * alt;

  const double s0 = std::sin(seq.pulse(0).theta_rad);
  return 0.25 * s0 * s0 * std::exp(-2.0 * gamma - envelope_exponent(tau, ens.delta_rad_ps()));
}

double intensity_free_induction(const PulseSequence& seq, const SpectralDensity& sd,
                                double temp_k, const EnsembleSpec& ens, double t,
                                const QuadConfig& qc) {
  const double t0 = seq.t0();
  if (t < t0) throw std::invalid_argument("intensity_free_induction: t must be >= t0");
  const double times[1] = {t0};
  const double gamma = gamma_pi(sd, temp_k, times, t, qc);
  const double s0 = std::sin(seq.pulse(0).theta_rad);
  return 0.25 * s0 * s0 *
         std::exp(-2.0 * gamma - envelope_exponent(t - t0, ens.delta_rad_ps()));
}

std::vector<std::pair<DiffractionOrder, cplx>> weak_polarization_terms(
    const PulseSequence& seq, const SpectralDensity& sd, double temp_k,
    const EnsembleSpec& ens, double t, const QuadConfig& qc) {
  require_weak(seq);
  const double t0 = seq.pulse(0).t_ps, t1 = seq.pulse(1).t_ps, t2 = seq.pulse(2).t_ps;
  if (t < t2) throw std::invalid_argument("weak_polarization_terms: t must be >= t2");

  const ThetaFactors f = theta_factors(seq);
  const double delta = ens.delta_rad_ps();
  const double d0 = seq.interval(0), d1 = seq.interval(1);

  const double g_mm0 = gamma_phase(sd, PhaseKind::MM0, t0, t1, t2, t, qc);
  const double g_mp0 = gamma_phase(sd, PhaseKind::MP0, t0, t1, t2, t, qc);
  const double g_00p = gamma_phase(sd, PhaseKind::M00Plus, t0, t1, t2, t, qc);
  const double g_00m = gamma_phase(sd, PhaseKind::M00Minus, t0, t1, t2, t, qc);
  const double g_m0x = gamma_phase(sd, PhaseKind::M0X, t0, t1, t2, t, qc);

  const auto& orders = enumerate_weak_orders();
  std::vector<std::pair<DiffractionOrder, cplx>> out;
  out.reserve(orders.size());

  const cplx i1(0.0, 1.0);
  for (std::size_t k = 0; k < orders.size(); ++k) {
    const WeakOrder& wo = orders[k];
    const double damp = std::exp(-gamma_weak(sd, temp_k, wo.exponent, t0, t1, t2, t, qc));
    const double tau = t - t2 + wo.d1 * d1 + wo.d0 * d0;
    const double env = std::exp(-0.5 * envelope_exponent(tau, delta));

    cplx amp;
    switch (k) {
      case 0:  // k0
        amp = 0.5 * f.sin0 * f.c1h2 * f.c2h2;
        break;
      case 1:  // k1
        amp = 0.5 * f.sin1 * f.c2h2 *
              (std::exp(i1 * g_mm0) * f.c0h2 - std::exp(-i1 * g_mm0) * f.s0h2);
        break;
      case 2:  // k2
        amp = 0.5 * f.sin2 *
              ((std::exp(i1 * g_00p) * f.c0h2 - std::exp(-i1 * g_00p) * f.s0h2) * f.c1h2 +
               (std::exp(i1 * g_00m) * f.s0h2 - std::exp(-i1 * g_00m) * f.c0h2) * f.s1h2);
        break;
      case 3:  // 2k1 - k0
        amp = -0.5 * f.sin0 * f.s1h2 * f.c2h2;
        break;
      case 4:  // 2k2 - k0
        amp = -0.5 * f.sin0 * f.c1h2 * f.s2h2;
        break;
      case 5:  // 2k2 - k1
        amp = 0.5 * f.sin1 * f.s2h2 *
              (-std::exp(i1 * g_mp0) * f.c0h2 + std::exp(-i1 * g_mp0) * f.s0h2);
        break;
      case 6:  // k2 - k1 + k0
        amp = -0.25 * f.sin0 * f.sin1 * f.sin2 * std::cos(g_m0x);
        break;
      case 7:  // k2 + k1 - k0
        amp = -0.25 * f.sin0 * f.sin1 * f.sin2 * std::cos(g_m0x);
        break;
      case 8:  // 2k2 - 2k1 + k0
        amp = 0.5 * f.sin0 * f.s1h2 * f.s2h2;
        break;
    }
    out.emplace_back(wo.order, amp * damp * env);
  }
  return out;
}

double intensity_weak(const PulseSequence& seq, const SpectralDensity& sd, double temp_k,
                      const EnsembleSpec& ens, WeakSignal which, double t,
                      const QuadConfig& qc) {
  require_weak(seq);
  const double t0 = seq.pulse(0).t_ps, t1 = seq.pulse(1).t_ps, t2 = seq.pulse(2).t_ps;
  if (t < t2) throw std::invalid_argument("intensity_weak: t must be >= t2");
  const double pref = weak_prefactor(seq, which);
  if (pref == 0.0) return 0.0;
  const double gamma = gamma_weak(sd, temp_k, weak_signature(which), t0, t1, t2, t, qc);
  const double tau = weak_tau(seq, which, t);
  return pref * std::exp(-2.0 * gamma - envelope_exponent(tau, ens.delta_rad_ps()));
}

namespace {

// Shared by integrated_intensity and sweep_t1: integrate one tracked order
// over time using a fixed-node plan, growing the plan's span on demand.
double integrate_weak_order(const PulseSequence& seq, const SpectralDensity& sd, double temp_k,
                            const EnsembleSpec& ens, WeakSignal which, double t_upper_ps,
                            const QuadConfig& qc, const GammaGrid* shared_grid) {
  const double t0 = seq.pulse(0).t_ps, t1 = seq.pulse(1).t_ps, t2 = seq.pulse(2).t_ps;
  const double pref = weak_prefactor(seq, which);
  if (pref == 0.0) return 0.0;

  const double delta = ens.delta_rad_ps();
  const bool auto_window = t_upper_ps <= 0.0;
  const double panel = delta > 0.0 ? std::min(0.1, 0.5 / delta) : 0.1;
  const Coeffs3 sig = weak_signature(which);

  double span = auto_window ? std::max({2.0 * (t2 - t0) + 1.0,
                                        delta > 0.0 ? t2 - t0 + (t2 - t0) + 8.0 / delta : 4.0})
                            : t_upper_ps - t0;

  for (;;) {
    std::unique_ptr<GammaGrid> own;
    const GammaGrid* grid = shared_grid;
    if (grid == nullptr || !auto_window) {
      own = std::make_unique<GammaGrid>(sd, temp_k, span, qc);
      grid = own.get();
    }
    const GammaGrid::WeakPlan plan = grid->plan(sig, t0, t1, t2);
    const auto f = [&](double t) {
      const double tau = weak_tau(seq, which, t);
      return pref * std::exp(-2.0 * plan.gamma(t) - envelope_exponent(tau, delta));
    };
    try {
      return march_time_integral(f, t2, t_upper_ps, auto_window, panel, qc).integral;
    } catch (const NumericError&) {
      // Either the plan span was exceeded or the cap was hit; retry with a
      // larger owned plan, up to the hard integration cap.
      if (!auto_window) throw;
      if (span > 80.0) throw;
      span *= 2.0;
      shared_grid = nullptr;
    }
  }
}

} // namespace

double integrated_intensity(const PulseSequence& seq, const SpectralDensity& sd, double temp_k,
                            const EnsembleSpec& ens, WeakSignal which, double t_upper_ps,
                            const QuadConfig& qc) {
  require_weak(seq);
  return integrate_weak_order(seq, sd, temp_k, ens, which, t_upper_ps, qc, nullptr);
}

double integrated_intensity(const PulseSequence& seq, const SpectralDensity& sd, double temp_k,
                            const EnsembleSpec& ens, WeakSignal which, const GammaGrid& grid,
                            double t_upper_ps, const QuadConfig& qc) {
  require_weak(seq);
  return integrate_weak_order(seq, sd, temp_k, ens, which, t_upper_ps, qc, &grid);
}

double intensity_weak(const PulseSequence& seq, const EnsembleSpec& ens, WeakSignal which,
                      const GammaGrid& grid, double t) {
  require_weak(seq);
  const double t0 = seq.pulse(0).t_ps, t1 = seq.pulse(1).t_ps, t2 = seq.pulse(2).t_ps;
  if (t < t2) throw std::invalid_argument("intensity_weak: t must be >= t2");
  const double pref = weak_prefactor(seq, which);
  if (pref == 0.0) return 0.0;
  const double gamma = grid.gamma_weak(weak_signature(which), t0, t1, t2, t);
  const double tau = weak_tau(seq, which, t);
  return pref * std::exp(-2.0 * gamma - envelope_exponent(tau, ens.delta_rad_ps()));
}

std::pair<SignalCurve, SignalCurve> sweep_t1(const PulseSequence& seq_template,
                                             const SpectralDensity& sd, double temp_k,
                                             const EnsembleSpec& ens,
                                             const std::vector<double>& t1_grid_ps,
                                             double t2_ps, const QuadConfig& qc, int jobs) {
  require_weak(seq_template);
  const double t0 = seq_template.pulse(0).t_ps;
  for (double t1 : t1_grid_ps)
    if (!(t1 > t0 && t1 < t2_ps))
      throw ConfigError("sweep_t1: every t1 must lie strictly between t0 and t2");

  SignalCurve four, six;
  four.order = enumerate_weak_orders()[kFourWaveIndex].order;
  six.order = enumerate_weak_orders()[kSixWaveIndex].order;
  four.samples.resize(t1_grid_ps.size());
  six.samples.resize(t1_grid_ps.size());
  if (t1_grid_ps.empty()) return {four, six};

  const double delta = ens.delta_rad_ps();
  const double span = std::max(2.0 * (t2_ps - t0) + 1.0,
                               delta > 0.0 ? 2.0 * (t2_ps - t0) + 8.0 / delta : 4.0);
  const GammaGrid grid(sd, temp_k, span, qc);

  const std::array<double, 3> thetas = {seq_template.pulse(0).theta_rad,
                                        seq_template.pulse(1).theta_rad,
                                        seq_template.pulse(2).theta_rad};

  parallel_for(t1_grid_ps.size(), jobs, [&](std::size_t i) {
    const double t1 = t1_grid_ps[i];
    const PulseSequence seq = PulseSequence::weak_three({t0, t1, t2_ps}, thetas);
    four.samples[i] = {t1, integrate_weak_order(seq, sd, temp_k, ens, WeakSignal::FourWave,
                                                0.0, qc, &grid)};
    six.samples[i] = {t1, integrate_weak_order(seq, sd, temp_k, ens, WeakSignal::SixWave, 0.0,
                                               qc, &grid)};
  });

  for (SignalCurve* curve : {&four, &six}) {
    curve->meta["order"] = curve->order.label();
    curve->meta["reservoir"] = sd.describe();
    curve->meta["temperature_k"] = std::to_string(temp_k);
    curve->meta["delta_b_mev"] = std::to_string(ens.delta_b_mev);
    curve->meta["t2_ps"] = std::to_string(t2_ps);
    curve->meta["kind"] = "integrated_vs_t1";
  }
  return {four, six};
}

} // namespace mwm

// kernels.cpp
#include "mwm/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mwm/quadrature.hpp"
#include "mwm/spectral.hpp"
#include "mwm/units.hpp"

namespace mwm {
namespace {

using cplx = std::complex<double>;

inline cplx phasor(double x) { return {std::cos(x), std::sin(x)}; }

void check_weak_times(double t0, double t1, double t2, double t) {
  if (!(t0 < t1 && t1 < t2))
    throw std::invalid_argument("kernels: pulse times must satisfy t0 < t1 < t2");
  if (t < t2) throw std::invalid_argument("kernels: observation time must satisfy t >= t2");
}

struct A3 {
  cplx a2, a1, a0;
};

A3 make_a3(double omega, double t0, double t1, double t2, double t) {
  return {interval_phase(omega, t2, t), interval_phase(omega, t1, t2),
          interval_phase(omega, t0, t1)};
}

// Signed sums of interval endpoint powers, the series coefficients of the
// small-omega limits: a(ta, tb) = i w (ta - tb) - w^2 (ta^2 - tb^2)/2 - ...
struct SeriesCoeffs {
  double l = 0.0;   // sum c (ta - tb)
  double q = 0.0;   // sum c (ta^2 - tb^2)
  double c3 = 0.0;  // sum c (ta^3 - tb^3)
};

SeriesCoeffs weak_series(Coeffs3 c, double t0, double t1, double t2, double t) {
  SeriesCoeffs s;
  const double cs[3] = {static_cast<double>(c.c2), static_cast<double>(c.c1),
                        static_cast<double>(c.c0)};
  const double ta[3] = {t2, t1, t0};
  const double tb[3] = {t, t2, t1};
  for (int i = 0; i < 3; ++i) {
    s.l += cs[i] * (ta[i] - tb[i]);
    s.q += cs[i] * (ta[i] * ta[i] - tb[i] * tb[i]);
    s.c3 += cs[i] * (ta[i] * ta[i] * ta[i] - tb[i] * tb[i] * tb[i]);
  }
  return s;
}

SeriesCoeffs pi_series(std::span<const double> times, double t) {
  SeriesCoeffs s;
  const int m_count = static_cast<int>(times.size()) - 1;
  double sign = 1.0;
  for (int m = 0; m < m_count; ++m, sign = -sign) {
    const double ta = times[m], tb = times[m + 1];
    s.l += sign * (ta - tb);
    s.q += sign * (ta * ta - tb * tb);
    s.c3 += sign * (ta * ta * ta - tb * tb * tb);
  }
  const double ta = times[m_count], tb = t;
  s.l += sign * (ta - tb);
  s.q += sign * (ta * ta - tb * tb);
  s.c3 += sign * (ta * ta * ta - tb * tb * tb);
  return s;
}

// |sum|^2 / w^2 = L^2 + w^2 (Q^2/4 - L C3 / 3) + O(w^4)
double series_filter_over_w2(const SeriesCoeffs& s, double omega) {
  return s.l * s.l + omega * omega * (0.25 * s.q * s.q - s.l * s.c3 / 3.0);
}

} // namespace

cplx interval_phase(double omega, double t_start, double t_end) {
  if (t_end < t_start) throw std::invalid_argument("interval_phase: t_end < t_start");
  return phasor(omega * t_start) - phasor(omega * t_end);
}

double filter_pi(double omega, std::span<const double> pulse_times, double t) {
  if (pulse_times.empty()) throw std::invalid_argument("filter_pi: no pulse times");
  for (std::size_t i = 1; i < pulse_times.size(); ++i)
    if (!(pulse_times[i] > pulse_times[i - 1]))
      throw std::invalid_argument("filter_pi: pulse times must be strictly increasing");
  if (t < pulse_times.back())
    throw std::invalid_argument("filter_pi: t must be >= last pulse time");

  cplx sum = 0.0;
  double sign = 1.0;
  const std::size_t m_count = pulse_times.size() - 1;
  for (std::size_t m = 0; m < m_count; ++m, sign = -sign)
    sum += sign * interval_phase(omega, pulse_times[m], pulse_times[m + 1]);
  sum += sign * interval_phase(omega, pulse_times[m_count], t);
  return std::norm(sum);
}

double filter_weak(double omega, Coeffs3 c, double t0, double t1, double t2, double t) {
  if (c.c2 == 0 && c.c1 == 0 && c.c0 == 0)
    throw std::invalid_argument("filter_weak: all-zero signature");
  check_weak_times(t0, t1, t2, t);
  const A3 a = make_a3(omega, t0, t1, t2, t);
  return std::norm(static_cast<double>(c.c2) * a.a2 + static_cast<double>(c.c1) * a.a1 +
                   static_cast<double>(c.c0) * a.a0);
}

double phase_bilinear_im(double omega, PhaseKind kind, double t0, double t1, double t2,
                         double t) {
  check_weak_times(t0, t1, t2, t);
  const A3 a = make_a3(omega, t0, t1, t2, t);
  switch (kind) {
    case PhaseKind::MM0: return std::imag((a.a2 + a.a1) * std::conj(a.a0));
    case PhaseKind::MP0: return std::imag((a.a2 - a.a1) * std::conj(a.a0));
    case PhaseKind::M00Plus: return std::imag(a.a2 * std::conj(a.a1 + a.a0));
    case PhaseKind::M00Minus: return std::imag(a.a2 * std::conj(a.a1 - a.a0));
    case PhaseKind::M0X: return std::imag(a.a2 * std::conj(a.a1));
  }
  throw std::logic_error("phase_bilinear_im: bad kind");
}

double filter_weak_over_w2_small(double omega, Coeffs3 c, double t0, double t1, double t2,
                                 double t) {
  return series_filter_over_w2(weak_series(c, t0, t1, t2, t), omega);
}

double filter_pi_over_w2_small(double omega, std::span<const double> pulse_times, double t) {
  return series_filter_over_w2(pi_series(pulse_times, t), omega);
}

double phase_bilinear_im_over_w2_small(double omega, PhaseKind kind, double t0, double t1,
                                       double t2, double t) {
  // Im[(i w L' - w^2 Q'/2)(-i w L'' - w^2 Q''/2)] / w^2 = w (Q' L'' - L' Q'')/2
  const auto pair_series = [&](Coeffs3 left, Coeffs3 right) {
    const SeriesCoeffs sl = weak_series(left, t0, t1, t2, t);
    const SeriesCoeffs sr = weak_series(right, t0, t1, t2, t);
    return 0.5 * omega * (sl.q * sr.l - sl.l * sr.q);
  };
  switch (kind) {
    case PhaseKind::MM0: return pair_series({1, 1, 0}, {0, 0, 1});
    case PhaseKind::MP0: return pair_series({1, -1, 0}, {0, 0, 1});
    case PhaseKind::M00Plus: return pair_series({1, 0, 0}, {0, 1, 1});
    case PhaseKind::M00Minus: return pair_series({1, 0, 0}, {0, 1, -1});
    case PhaseKind::M0X: return pair_series({1, 0, 0}, {0, 1, 0});
  }
  throw std::logic_error("phase_bilinear_im_over_w2_small: bad kind");
}

double theta_phase(const SpectralDensity& sd, double t_start, double t_end) {
  return theta_phase(sd, t_start, t_end, QuadConfig{});
}

double theta_phase(const SpectralDensity& sd, double t_start, double t_end,
                   const QuadConfig& qc) {
  if (t_end < t_start) throw std::invalid_argument("theta_phase: t_end < t_start");
  const double tau = t_end - t_start;
  if (tau == 0.0) return 0.0;

  if (const SingleMode* sm = sd.single_mode()) {
    const double w = energy_to_angfreq(sm->omega_p_mev);
    return sm->g_sq_mev2 / (sm->omega_p_mev * sm->omega_p_mev) * (w * tau - std::sin(w * tau));
  }

  const double omega_max = qc.omega_max_mev > 0.0 ? qc.omega_max_mev : sd.frequency_scale_mev();
  // I(Omega) [x - sin x] / Omega^2 with x = omega tau rewritten as
  // I / hbar^2 * tau^2 * (x - sin x)/x^2, which stays finite at Omega -> 0.
  const auto integrand = [&](double omega_mev) {
    const double x = energy_to_angfreq(omega_mev) * tau;
    const double core = std::abs(x) < 1e-3 ? (x / 6.0 - x * x * x / 120.0)
                                           : (x - std::sin(x)) / (x * x);
    return sd.density(omega_mev) / (kPhys.hbar * kPhys.hbar) * tau * tau * core;
  };
  const double seed = 3.14159265358979323846 * kPhys.hbar / std::max(tau, 1e-6);
  return quad::integrate_adaptive(integrand, 0.0, omega_max, qc.rel_tol, qc.abs_tol,
                                  qc.max_panels, seed);
}

} // namespace mwm

// gamma.cpp
#include "mwm/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "mwm/errors.hpp"
#include "mwm/units.hpp"

namespace mwm {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Below omega * t_span the phasor differences cancel catastrophically and the
// kernels switch to their series forms.
constexpr double kSeriesThreshold = 3e-3;

double auto_omega_max(const SpectralDensity& sd, const QuadConfig& qc) {
  return qc.omega_max_mev > 0.0 ? qc.omega_max_mev : sd.frequency_scale_mev();
}

// Omega coth(Omega / 2 kB T) in meV; smooth and finite down to Omega = 0.
double omega_coth(double omega_mev, double temp_k) {
  if (temp_k == 0.0) return omega_mev;
  const double x = omega_mev / (2.0 * kPhys.kb * temp_k);
  return omega_mev / std::tanh(x);
}

// I(Omega) coth(...) evaluated as (I/Omega) * (Omega coth), stable at 0+.
double thermal_density(const SpectralDensity& sd, double omega_mev, double temp_k) {
  if (omega_mev <= 0.0) return 0.0;
  return sd.density(omega_mev) / omega_mev * omega_coth(omega_mev, temp_k);
}

double seed_width_mev(double t_span) {
  return kPi * kPhys.hbar / std::max(t_span, 1e-3);
}

} // namespace

double gamma_pi(const SpectralDensity& sd, double temp_k, std::span<const double> pulse_times,
                double t, const QuadConfig& qc) {
  if (pulse_times.empty()) throw std::invalid_argument("gamma_pi: no pulse times");
  if (t == pulse_times.front() && pulse_times.size() == 1) return 0.0;

  if (const SingleMode* sm = sd.single_mode()) {
    const double w = energy_to_angfreq(sm->omega_p_mev);
    return single_mode_g_prime(*sm, temp_k) * filter_pi(w, pulse_times, t);
  }

  const double t_span = t - pulse_times.front();
  const double hbar2 = kPhys.hbar * kPhys.hbar;
  const auto integrand = [&](double omega_mev) {
    const double w = energy_to_angfreq(omega_mev);
    const double k = w * t_span < kSeriesThreshold
                         ? filter_pi_over_w2_small(w, pulse_times, t)
                         : filter_pi(w, pulse_times, t) / (w * w);
    return thermal_density(sd, omega_mev, temp_k) * k / hbar2;
  };
  return 2.0 * quad::integrate_adaptive(integrand, 0.0, auto_omega_max(sd, qc), qc.rel_tol,
                                        qc.abs_tol, qc.max_panels, seed_width_mev(t_span));
}

double gamma_weak(const SpectralDensity& sd, double temp_k, Coeffs3 c, double t0, double t1,
                  double t2, double t, const QuadConfig& qc) {
  if (const SingleMode* sm = sd.single_mode()) {
    const double w = energy_to_angfreq(sm->omega_p_mev);
    return single_mode_g_prime(*sm, temp_k) * filter_weak(w, c, t0, t1, t2, t);
  }
  const double t_span = t - t0;
  const double hbar2 = kPhys.hbar * kPhys.hbar;
  const auto integrand = [&](double omega_mev) {
    const double w = energy_to_angfreq(omega_mev);
    const double k = w * t_span < kSeriesThreshold
                         ? filter_weak_over_w2_small(w, c, t0, t1, t2, t)
                         : filter_weak(w, c, t0, t1, t2, t) / (w * w);
    return thermal_density(sd, omega_mev, temp_k) * k / hbar2;
  };
  return 2.0 * quad::integrate_adaptive(integrand, 0.0, auto_omega_max(sd, qc), qc.rel_tol,
                                        qc.abs_tol, qc.max_panels, seed_width_mev(t_span));
}

double gamma_phase(const SpectralDensity& sd, PhaseKind kind, double t0, double t1, double t2,
                   double t, const QuadConfig& qc) {
  if (const SingleMode* sm = sd.single_mode()) {
    const double w = energy_to_angfreq(sm->omega_p_mev);
    return 4.0 * sm->g_sq_mev2 / (sm->omega_p_mev * sm->omega_p_mev) *
           phase_bilinear_im(w, kind, t0, t1, t2, t);
  }
  const double t_span = t - t0;
  const double hbar2 = kPhys.hbar * kPhys.hbar;
  const auto integrand = [&](double omega_mev) {
    const double w = energy_to_angfreq(omega_mev);
    const double k = w * t_span < kSeriesThreshold
                         ? phase_bilinear_im_over_w2_small(w, kind, t0, t1, t2, t)
                         : phase_bilinear_im(w, kind, t0, t1, t2, t) / (w * w);
    return sd.density(omega_mev) * k / hbar2;
  };
  return 4.0 * quad::integrate_adaptive(integrand, 0.0, auto_omega_max(sd, qc), qc.rel_tol,
                                        qc.abs_tol, qc.max_panels, seed_width_mev(t_span));
}

double single_mode_g_prime(const SingleMode& sm, double temp_k) {
  return 2.0 * sm.g_sq_mev2 / (sm.omega_p_mev * sm.omega_p_mev) *
         coth_thermal(sm.omega_p_mev, temp_k);
}

double single_mode_gamma_plus(double g_prime, double omega_p_rad_ps, double t0, double t) {
  return g_prime * 2.0 * (1.0 - std::cos(omega_p_rad_ps * (t - t0)));
}

double single_mode_gamma_minus(double g_prime, double omega_p_rad_ps, double t0, double t1,
                               double t) {
  if (!(t0 < t1 && t1 <= t))
    throw std::invalid_argument("single_mode_gamma_minus: requires t0 < t1 <= t");
  const double x = omega_p_rad_ps * (t1 - t0);
  const double y = omega_p_rad_ps * (t - t0);
  const double r = std::sqrt(5.0 - 4.0 * std::cos(x));
  // Branch of phi for which this equals g' |a0 - a1|^2 identically:
  // cos(phi) = -(1 - 2 cos x)/r, sin(phi) = -2 sin(x)/r.
  const double phi = std::atan2(-2.0 * std::sin(x), -(1.0 - 2.0 * std::cos(x)));
  return g_prime * (2.0 * (3.0 - 2.0 * std::cos(x)) - 2.0 * r * std::cos(y + phi));
}

// ---------------------------------------------------------------------------
// Fixed-node plan

GammaGrid::GammaGrid(const SpectralDensity& sd, double temp_k, double t_span_ps,
                     const QuadConfig& qc) {
  t_span_ = std::max(t_span_ps, 1e-3);
  if (const SingleMode* sm = sd.single_mode()) {
    single_mode_ = true;
    g_prime_ = single_mode_g_prime(*sm, temp_k);
    omega_p_rad_ps_ = energy_to_angfreq(sm->omega_p_mev);
    g_sq_over_wp2_ = sm->g_sq_mev2 / (sm->omega_p_mev * sm->omega_p_mev);
    return;
  }

  const double omega_max = auto_omega_max(sd, qc);
  // Half an oscillation period per panel, with a floor so narrow spectral
  // structure is still resolved.
  const int osc_panels = static_cast<int>(std::ceil(omega_max / seed_width_mev(t_span_)));
  const int panels = std::max({osc_panels, 64});
  const quad::FixedRule rule = quad::composite_gauss(0.0, omega_max, panels, 15);

  const double hbar2 = kPhys.hbar * kPhys.hbar;
  omega_.reserve(rule.nodes.size());
  weight_.reserve(rule.nodes.size());
  weight_phase_.reserve(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double omega_mev = rule.nodes[i];
    const double w = energy_to_angfreq(omega_mev);
    const double base = rule.weights[i] / (hbar2 * w * w);
    omega_.push_back(w);
    weight_.push_back(2.0 * base * thermal_density(sd, omega_mev, temp_k));
    weight_phase_.push_back(4.0 * base * sd.density(omega_mev));
  }
}

double GammaGrid::gamma_weak(Coeffs3 c, double t0, double t1, double t2, double t) const {
  if (single_mode_) return g_prime_ * filter_weak(omega_p_rad_ps_, c, t0, t1, t2, t);
  if (t - t0 > 1.25 * t_span_)
    throw NumericError("GammaGrid: t exceeds the planned time span", 0.0, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < omega_.size(); ++i)
    sum += weight_[i] * filter_weak(omega_[i], c, t0, t1, t2, t);
  return sum;
}

double GammaGrid::gamma_pi(std::span<const double> pulse_times, double t) const {
  if (single_mode_) return g_prime_ * filter_pi(omega_p_rad_ps_, pulse_times, t);
  if (t - pulse_times.front() > 1.25 * t_span_)
    throw NumericError("GammaGrid: t exceeds the planned time span", 0.0, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < omega_.size(); ++i)
    sum += weight_[i] * filter_pi(omega_[i], pulse_times, t);
  return sum;
}

double GammaGrid::gamma_phase(PhaseKind kind, double t0, double t1, double t2, double t) const {
  if (single_mode_)
    return 4.0 * g_sq_over_wp2_ * phase_bilinear_im(omega_p_rad_ps_, kind, t0, t1, t2, t);
  if (t - t0 > 1.25 * t_span_)
    throw NumericError("GammaGrid: t exceeds the planned time span", 0.0, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < omega_.size(); ++i)
    sum += weight_phase_[i] * phase_bilinear_im(omega_[i], kind, t0, t1, t2, t);
  return sum;
}

GammaGrid::WeakPlan GammaGrid::plan(Coeffs3 c, double t0, double t1, double t2) const {
  WeakPlan p;
  p.grid_ = this;
  p.c_ = c;
  p.t0_ = t0;
  p.t1_ = t1;
  p.t2_ = t2;
  if (single_mode_) {
    p.single_mode_ = true;
    p.g_prime_ = g_prime_;
    p.omega_p_ = omega_p_rad_ps_;
    return p;
  }
  p.u_.resize(omega_.size());
  const double c2 = c.c2, c1 = c.c1, c0 = c.c0;
  double const_part = 0.0;
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    const double w = omega_[i];
    const std::complex<double> v = c2 * std::polar(1.0, w * t2) +
                                   c1 * interval_phase(w, t1, t2) +
                                   c0 * interval_phase(w, t0, t1);
    const_part += weight_[i] * (std::norm(v) + c2 * c2);
    p.u_[i] = weight_[i] * v;
  }
  p.const_part_ = const_part;
  return p;
}

double GammaGrid::WeakPlan::gamma(double t) const {
  if (single_mode_) return g_prime_ * filter_weak(omega_p_, c_, t0_, t1_, t2_, t);
  if (t - t0_ > 1.25 * grid_->t_span_)
    throw NumericError("GammaGrid::WeakPlan: t exceeds the planned time span", 0.0, 0.0);
  if (c_.c2 == 0) return const_part_;
  // f = |v|^2 + 1 - 2 c2 Re[v e^{-i w t}]
  double osc = 0.0;
  const auto& omega = grid_->omega_;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double wt = omega[i] * t;
    osc += u_[i].real() * std::cos(wt) + u_[i].imag() * std::sin(wt);
  }
  return const_part_ - 2.0 * static_cast<double>(c_.c2) * osc;
}

} // namespace mwm

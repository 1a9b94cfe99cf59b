// gamma.hpp — Dephasing exponents and phase functions of the pulse sequences
//
// Turns kernels x spectral density x temperature into the exponents that
// damp each diffraction order:
//
//   Gamma = 2 int_0^inf dOmega I(Omega) f(omega, t) / Omega^2 coth(Omega / 2 kB T)
//   gamma = 4 int_0^inf dOmega I(Omega) Im{...} / Omega^2
//
// with omega = Omega/hbar. Single-mode densities bypass quadrature entirely.
#pragma once

#include <span>

#include "mwm/kernels.hpp"
#include "mwm/quadrature.hpp"
#include "mwm/spectral.hpp"

namespace mwm {

/// Exponent of the pi-train sequence. `pulse_times` = t_0 .. t_M, t >= t_M.
double gamma_pi(const SpectralDensity& sd, double temp_k, std::span<const double> pulse_times,
                double t, const QuadConfig& qc = {});

/// Exponent Gamma_{c2 c1 c0} of one three-pulse term.
double gamma_weak(const SpectralDensity& sd, double temp_k, Coeffs3 c, double t0, double t1,
                  double t2, double t, const QuadConfig& qc = {});

/// Phase function gamma of one three-pulse term (radians).
double gamma_phase(const SpectralDensity& sd, PhaseKind kind, double t0, double t1, double t2,
                   double t, const QuadConfig& qc = {});

/// Dimensionless single-mode coupling g' = 2 (g^2 / omega_p^2) coth(...).
double single_mode_g_prime(const SingleMode& sm, double temp_k);

/// Closed form of the single pi-pulse exponent at a single reservoir mode:
///   g' { 2[3 - 2 cos(w D0)] - 2 sqrt(5 - 4 cos(w D0)) cos[w (t - t0) + phi] },
/// phi on the branch that makes this identical to g' * filter_pi(M = 1).
double single_mode_gamma_minus(double g_prime, double omega_p_rad_ps, double t0, double t1,
                               double t);

/// Free-decay counterpart g' * 2[1 - cos(w (t - t0))].
double single_mode_gamma_plus(double g_prime, double omega_p_rad_ps, double t0, double t);

/// Precomputed fixed-node quadrature plan for one (density, temperature)
/// pair. Much faster than the adaptive engine when many exponents are needed
/// over a time grid (integrated intensities, sweeps, fitting); agreement with
/// the adaptive path is asserted in the test suite.
class GammaGrid {
public:
  /// t_span_ps must bound the largest |t - t0| the plan will ever see.
  GammaGrid(const SpectralDensity& sd, double temp_k, double t_span_ps,
            const QuadConfig& qc = {});

  double gamma_weak(Coeffs3 c, double t0, double t1, double t2, double t) const;
  double gamma_pi(std::span<const double> pulse_times, double t) const;
  double gamma_phase(PhaseKind kind, double t0, double t1, double t2, double t) const;

  /// Per-sequence plan: everything independent of the observation time is
  /// folded into complex node coefficients, so one exponent costs a single
  /// trigonometric pass over the nodes.
  class WeakPlan {
  public:
    double gamma(double t) const;  // Gamma_{c}(t)
  private:
    friend class GammaGrid;
    const GammaGrid* grid_ = nullptr;
    // closed form parameters for the single-mode bypass
    bool single_mode_ = false;
    double g_prime_ = 0.0, omega_p_ = 0.0;
    Coeffs3 c_{};
    double t0_ = 0, t1_ = 0, t2_ = 0;
    double const_part_ = 0.0;              // t-independent piece of the integral
    std::vector<std::complex<double>> u_;  // per-node phasor coefficients
  };
  WeakPlan plan(Coeffs3 c, double t0, double t1, double t2) const;

private:
  friend class WeakPlan;
  bool single_mode_ = false;
  double g_prime_ = 0.0;
  double omega_p_rad_ps_ = 0.0;
  double g_sq_over_wp2_ = 0.0;  // g^2 / omega_p^2 for the phase closed forms
  double t_span_ = 0.0;
  std::vector<double> omega_;         // node frequencies, rad/ps
  std::vector<double> weight_;        // 2 I coth / omega^2 * dOmega per node (exponents)
  std::vector<double> weight_phase_;  // 4 I / omega^2 * dOmega per node (phases)
};

} // namespace mwm

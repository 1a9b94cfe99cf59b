// kernels.hpp — Spectral filter functions of frequency and pulse timing
//
// Everything here is the oscillatory part living inside the frequency
// integrals: pure trigonometry in omega [rad/ps] and the pulse times [ps].
// Temperature weighting is applied one layer up, in the gamma module.
#pragma once

#include <complex>
#include <span>

namespace mwm {

/// Interval phase factor a(omega; ta, tb) = e^{i omega ta} - e^{i omega tb}.
std::complex<double> interval_phase(double omega, double t_start, double t_end);

/// Filter of the pi-pulse train:
///   | sum_{m=0}^{M-1} (-1)^m a(t_m, t_{m+1}) + (-1)^M a(t_M, t) |^2.
/// `pulse_times` holds t_0 .. t_M strictly increasing, t >= t_M.
double filter_pi(double omega, std::span<const double> pulse_times, double t);

/// Sign signature (c2, c1, c0), each in {-1, 0, +1}, of a three-pulse
/// exponent or filter.
struct Coeffs3 {
  int c2 = 0, c1 = 0, c0 = 0;
  bool operator==(const Coeffs3&) const = default;
};

/// f_{c2 c1 c0}(omega, t) = |c2 a2 + c1 a1 + c0 a0|^2 with
/// a2 = a(t2, t), a1 = a(t1, t2), a0 = a(t0, t1).
double filter_weak(double omega, Coeffs3 c, double t0, double t1, double t2, double t);

/// The five bilinear phase integrands of the three-pulse expansion.
enum class PhaseKind {
  MM0,       // Im{ [a2 + a1] a0* }
  MP0,       // Im{ [a2 - a1] a0* }
  M00Plus,   // Im{ a2 [a1 + a0]* }
  M00Minus,  // Im{ a2 [a1 - a0]* }
  M0X,       // Im{ a2 a1* }   (shared by the two mixed echo orders)
};

double phase_bilinear_im(double omega, PhaseKind kind, double t0, double t1, double t2,
                         double t);

/// Low-frequency limits: filter/omega^2 -> L^2 and Im-bilinear/omega^2 ->
/// omega (Q' L'' - L' Q'')/2, with L the signed interval lengths and Q the
/// signed t^2 differences. Used by the quadrature layer below
/// omega * t_span < 1e-2 where direct evaluation cancels badly.
double filter_weak_over_w2_small(double omega, Coeffs3 c, double t0, double t1, double t2,
                                 double t);
double filter_pi_over_w2_small(double omega, std::span<const double> pulse_times, double t);
double phase_bilinear_im_over_w2_small(double omega, PhaseKind kind, double t0, double t1,
                                       double t2, double t);

class SpectralDensity;
struct QuadConfig;

/// Global phase accumulated by one free-evolution interval,
///   Theta = int dOmega I(Omega) [omega tau - sin(omega tau)] / Omega^2,
/// with omega = Omega/hbar and tau = t_end - t_start. Cancels in every
/// intensity; exposed for cross-checks against the dense oracle.
double theta_phase(const SpectralDensity& sd, double t_start, double t_end);
double theta_phase(const SpectralDensity& sd, double t_start, double t_end,
                   const QuadConfig& qc);

} // namespace mwm

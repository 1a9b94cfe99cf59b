// oracle.hpp — Exact dense evolution of one qubit and one truncated boson mode
//
// Ground truth for the analytic formulas: the full model restricted to a
// single reservoir mode, evolved as dense matrices on qubit (x) Fock space.
// Pulse unitaries and displacement evolutions are exact on the truncation;
// every filter, exponent and phase function can be checked against traces of
// this state.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "mwm/spectral.hpp"

namespace mwm {

class ThermalOracle {
public:
  /// Qubit in the ground state, boson thermal at temperature T. n_cut <= 0
  /// picks the smallest cutoff whose thermal tail is below 1e-10, plus
  /// headroom for the displacements driven by g.
  ThermalOracle(double omega_p_rad_ps, double g_rad_ps, double temp_k, int n_cut = 0);

  /// Impulsive rotation exp{(theta/2)[sigma+ e^{i phi} - sigma- e^{-i phi}]}.
  void apply_pulse(double theta_rad, double phi_rad);

  /// Free qubit-reservoir evolution for dt, phase-referenced to the current
  /// time. Raises CutoffError if population leaks into the top Fock level.
  void evolve_free(double dt_ps);

  /// Tr[(sigma+ (x) 1) rho].
  std::complex<double> polarization() const;

  double time_ps() const { return t_ps_; }
  int n_cut() const { return n_cut_; }
  double trace_real() const;
  double hermiticity_defect() const;
  /// Purity of the reduced qubit state.
  double qubit_purity() const;
  const Eigen::MatrixXcd& rho() const { return rho_; }

  /// The two-interval unitary used by evolve_free, exposed for cross-checks
  /// against a brute-force time-ordered product.
  Eigen::MatrixXcd free_propagator(double t_start_ps, double dt_ps) const;

  double omega_p() const { return omega_p_; }
  double g() const { return g_; }
  double mean_occupation() const { return n_bar_; }

private:
  Eigen::MatrixXcd displacement(std::complex<double> alpha) const;

  double omega_p_;  // rad/ps
  double g_;        // rad/ps
  double temp_k_;
  double n_bar_;
  int n_cut_;
  double t_ps_ = 0.0;
  Eigen::MatrixXcd rho_;  // (2 (n_cut+1))^2, qubit-major ordering, |down> = 0
};

/// Amplitudes of all nine diffraction orders extracted by phase cycling: the
/// oracle is run over a 5x5x5 grid of pulse phases (2 pi / 5 steps) and each
/// order's amplitude is the matching discrete Fourier component of
/// Tr[sigma+ rho]. Sequence: areas `thetas` at `times`, observed at t.
struct PhaseCycleResult {
  std::array<std::complex<double>, 9> amplitudes;  // ordered as enumerate_weak_orders()
  /// Largest reconstruction residual of the total polarization at probe
  /// phases off the extraction grid; bounds the weight left outside the nine
  /// orders.
  double completeness_residual = 0.0;
};

PhaseCycleResult phase_cycled_amplitudes(double omega_p_rad_ps, double g_rad_ps, double temp_k,
                                         const std::array<double, 3>& times_ps, double t_ps,
                                         const std::array<double, 3>& thetas_rad,
                                         int n_cut = 0);

} // namespace mwm

// units.hpp — Physical constants and the meV <-> rad/ps conversions
//
// Internal convention used throughout the library: angular frequencies in
// rad/ps, times in ps, temperatures in K. Energies appear in meV only at API
// boundaries (reservoir parameters, inhomogeneous widths) and are converted
// on entry with the helpers below.
#pragma once

#include <cmath>
#include <stdexcept>

namespace mwm {

/// CODATA constants in the meV/ps/K system, fixed at build time. The struct
/// exists so tests can pass perturbed values; user configuration never can.
struct PhysConst {
  double hbar = 0.6582119569;   // meV·ps
  double kb = 0.08617333262;    // meV/K
};

inline constexpr PhysConst kPhys{};

/// omega = E / hbar, meV -> rad/ps. Linear, sign-preserving.
inline double energy_to_angfreq(double e_mev, const PhysConst& pc = kPhys) {
  return e_mev / pc.hbar;
}

inline double angfreq_to_energy(double omega_rad_ps, const PhysConst& pc = kPhys) {
  return omega_rad_ps * pc.hbar;
}

/// coth(E / 2 k_B T), the thermal occupation weight. T = 0 returns the exact
/// limit 1. E must be positive; the E -> 0 limits are taken analytically by
/// the quadrature layer, never here.
inline double coth_thermal(double e_mev, double temp_k, const PhysConst& pc = kPhys) {
  if (!(e_mev > 0.0)) throw std::domain_error("coth_thermal: requires E > 0");
  if (temp_k < 0.0) throw std::domain_error("coth_thermal: requires T >= 0");
  if (temp_k == 0.0) return 1.0;
  const double x = e_mev / (2.0 * pc.kb * temp_k);
  return 1.0 / std::tanh(x);
}

} // namespace mwm

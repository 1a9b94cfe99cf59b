// spectral.hpp — Reservoir spectral densities I(Omega) and derived quantities
#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mwm/units.hpp"

namespace mwm {

// I(Omega) = alpha * Omega * exp(-Omega / omega_c)
struct Ohmic {
  double alpha = 0.1;        // dimensionless coupling
  double omega_c_mev = 8.0;  // cutoff
};

// Ohmic term plus a Gaussian peak at omega_p:
//   alpha_p * Omega^2 / (sqrt(pi) gamma_p) * exp(-(Omega - omega_p)^2 / gamma_p^2)
struct GaussianOhmic {
  double alpha = 0.1;
  double omega_c_mev = 8.0;
  double alpha_p = 0.05;
  double omega_p_mev = 13.0;
  double gamma_p_mev = 4.0;
};

// I(Omega) = g_sq * delta(Omega - omega_p). Has no pointwise density; every
// frequency integral collapses to a closed form at omega_p.
struct SingleMode {
  double g_sq_mev2 = 1.0;
  double omega_p_mev = 13.0;
};

// Measured spectrum, linearly interpolated, zero outside the sampled range.
struct Tabulated {
  std::vector<std::pair<double, double>> samples;  // (Omega [meV], I [meV]), Omega strictly increasing
};

class SpectralDensity {
public:
  using Form = std::variant<Ohmic, GaussianOhmic, SingleMode, Tabulated>;

  explicit SpectralDensity(Form form);

  static SpectralDensity ohmic(double alpha, double omega_c_mev);
  static SpectralDensity gaussian_ohmic(double alpha, double omega_c_mev, double alpha_p,
                                        double omega_p_mev, double gamma_p_mev);
  static SpectralDensity single_mode(double g_sq_mev2, double omega_p_mev);
  static SpectralDensity tabulated(std::vector<std::pair<double, double>> samples);
  /// Two-column CSV (omega_mev, i_mev) with a mandatory header line.
  static SpectralDensity tabulated_from_csv(const std::string& path);

  /// I(Omega) in meV at Omega >= 0 in meV. Throws for SingleMode, whose
  /// delta spectrum is handled by closed-form paths in the gamma module.
  double density(double omega_mev) const;

  /// Thermalized boson factor eta(Omega, T) = I(Omega) coth(Omega / 2 k_B T).
  double eta(double omega_mev, double temp_k) const;

  /// argmax over Omega of eta(Omega, T), in meV. SingleMode returns omega_p.
  double omega_th_mev(double temp_k) const;

  /// pi / (2 Omega_th) with Omega_th in rad/ps; the pulse-interval bound below
  /// which a control train suppresses rather than accelerates dephasing.
  double stabilization_interval_ps(double temp_k) const;

  bool is_single_mode() const { return std::holds_alternative<SingleMode>(form_); }
  const SingleMode* single_mode() const { return std::get_if<SingleMode>(&form_); }
  const Form& form() const { return form_; }

  /// Upper end of the frequency range worth integrating/searching over, meV.
  double frequency_scale_mev() const;

  std::string describe() const;

private:
  Form form_;
};

} // namespace mwm

// signals.hpp — Time-resolved and time-integrated multiwave-mixing intensities
#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mwm/gamma.hpp"
#include "mwm/pulses.hpp"
#include "mwm/spectral.hpp"

namespace mwm {

/// Ensemble description: Gaussian inhomogeneous broadening of width delta_B
/// (0 = homogeneous). Amplitudes carry exp(-tau^2 delta^2 / 2), intensities
/// exp(-tau^2 delta^2), tau being each term's detuning time argument.
struct EnsembleSpec {
  double delta_b_mev = 0.0;
  double delta_rad_ps() const { return energy_to_angfreq(delta_b_mev); }
};

struct SignalCurve {
  DiffractionOrder order;
  std::vector<std::pair<double, double>> samples;  // (t or t1 [ps], intensity)
  std::map<std::string, std::string> meta;
};

/// Per-qubit intensity of the pi-train direction (-1)^M K^(M) at time t:
///   (1/4) sin^2(theta0) exp[-2 Gamma(t) - tau(t)^2 delta^2].
double intensity_pi_train(const PulseSequence& seq, const SpectralDensity& sd, double temp_k,
                          const EnsembleSpec& ens, double t, const QuadConfig& qc = {});

/// Free-induction intensity after the exciting pulse alone.
double intensity_free_induction(const PulseSequence& seq, const SpectralDensity& sd,
                                double temp_k, const EnsembleSpec& ens, double t,
                                const QuadConfig& qc = {});

/// The nine per-qubit complex amplitudes of the three-pulse polarization at
/// time t, ensemble envelope included, ordered as enumerate_weak_orders().
std::vector<std::pair<DiffractionOrder, std::complex<double>>> weak_polarization_terms(
    const PulseSequence& seq, const SpectralDensity& sd, double temp_k,
    const EnsembleSpec& ens, double t, const QuadConfig& qc = {});

enum class WeakSignal { FourWave, SixWave };  // 2k2-k0 and 2k2-2k1+k0

/// Intensity of one of the two tracked echo directions.
double intensity_weak(const PulseSequence& seq, const SpectralDensity& sd, double temp_k,
                      const EnsembleSpec& ens, WeakSignal which, double t,
                      const QuadConfig& qc = {});

/// Integrated intensity from the last pulse onward. t_upper_ps <= 0 selects
/// the automatic window: integration extends until the signal stays below
/// 1e-12 of its running peak for five consecutive panels.
double integrated_intensity(const PulseSequence& seq, const SpectralDensity& sd, double temp_k,
                            const EnsembleSpec& ens, WeakSignal which,
                            double t_upper_ps = 0.0, const QuadConfig& qc = {});

/// Variants reusing a caller-provided plan built for the same (sd, T); used
/// by the sweep and fitting hot paths.
double integrated_intensity(const PulseSequence& seq, const SpectralDensity& sd, double temp_k,
                            const EnsembleSpec& ens, WeakSignal which, const GammaGrid& grid,
                            double t_upper_ps = 0.0, const QuadConfig& qc = {});
double intensity_weak(const PulseSequence& seq, const EnsembleSpec& ens, WeakSignal which,
                      const GammaGrid& grid, double t);

/// Integrated 4WM and 6WM intensities versus the first-pulse time, t2 fixed.
/// Points are evaluated concurrently when jobs > 1; output order and values
/// are independent of the schedule.
std::pair<SignalCurve, SignalCurve> sweep_t1(
    const PulseSequence& seq_template, const SpectralDensity& sd, double temp_k,
    const EnsembleSpec& ens, const std::vector<double>& t1_grid_ps, double t2_ps,
    const QuadConfig& qc = {}, int jobs = 1);

} // namespace mwm

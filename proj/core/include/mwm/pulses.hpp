// pulses.hpp — Impulsive pulse sequences and phase-matching bookkeeping
//
// Wavevectors are kept symbolic: a diffraction order is the integer
// coefficient vector (n0, n1, ...) of q = sum_m n_m k_m. Every observable in
// the model depends only on these integers, never on 3-D geometry.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "mwm/kernels.hpp"

namespace mwm {

struct Pulse {
  double t_ps = 0.0;       // arrival time
  double theta_rad = 0.0;  // pulse area, [0, 2pi]
  int k_label = 0;         // index m of wavevector k_m
};

enum class SequenceMode { PiTrain, WeakThreePulse };

class PulseSequence {
public:
  /// Exciting pulse of area theta0 at t0, then M pi pulses at the given times.
  static PulseSequence pi_train(double t0_ps, std::vector<double> pi_times_ps,
                                double theta0_rad);
  /// Equally spaced train: pulses at t0 + interval, ..., with the last
  /// interval optionally different (the varied echo delay).
  static PulseSequence pi_train_uniform(double t0_ps, int m_pulses, double interval_ps,
                                        double theta0_rad, double last_interval_ps = 0.0);
  static PulseSequence weak_three(const std::array<double, 3>& times_ps,
                                  const std::array<double, 3>& thetas_rad);

  SequenceMode mode() const { return mode_; }
  const std::vector<Pulse>& pulses() const { return pulses_; }
  const Pulse& pulse(std::size_t m) const { return pulses_.at(m); }
  std::size_t size() const { return pulses_.size(); }

  /// Number of control pulses after the exciting pulse.
  int control_count() const { return static_cast<int>(pulses_.size()) - 1; }

  double t0() const { return pulses_.front().t_ps; }
  double t_last() const { return pulses_.back().t_ps; }
  std::vector<double> times() const;
  /// Delta_m = t_{m+1} - t_m for m = 0 .. size-2.
  double interval(std::size_t m) const;

private:
  PulseSequence(std::vector<Pulse> pulses, SequenceMode mode);
  std::vector<Pulse> pulses_;
  SequenceMode mode_;
};

struct DiffractionOrder {
  std::vector<int> coeffs;  // n_m over k_0 .. k_M

  bool operator==(const DiffractionOrder& o) const { return coeffs == o.coeffs; }
  /// Human-readable label, e.g. "2k2-2k1+k0".
  std::string label() const;
};

/// Direction radiated by an exciting pulse followed by M ideal pi pulses:
/// (-1)^M [2 sum_{m=1..M} (-1)^m k_m + k_0] as integer coefficients.
DiffractionOrder phase_matching_direction(int m_pulses);

/// One term of the three-pulse expansion: its direction, the exponent
/// signature of its dephasing integral, and its detuning time argument
/// tau(t) = t - t2 + d1*Delta1 + d0*Delta0.
struct WeakOrder {
  DiffractionOrder order;
  Coeffs3 exponent;  // signature (c2, c1, c0) of the dephasing exponent
  int d1 = 0;        // coefficient of Delta_1 in the detuning argument
  int d0 = 0;        // coefficient of Delta_0
};

/// All nine diffraction orders of the three-pulse expansion, in the order the
/// polarization terms are assembled.
const std::array<WeakOrder, 9>& enumerate_weak_orders();

/// Index into enumerate_weak_orders() for the two tracked echo directions.
inline constexpr std::size_t kFourWaveIndex = 4;  // 2k2 - k0
inline constexpr std::size_t kSixWaveIndex = 8;   // 2k2 - 2k1 + k0

struct EchoTime {
  double t_ps = 0.0;
  bool pre_window = false;  // rephasing time falls before the last pulse
};

/// Time at which the detuning argument of `order` vanishes. Throws
/// NoEchoError for orders whose argument is pinned to a pulse arrival
/// (free-induction-like terms that never rephase).
EchoTime echo_time(const PulseSequence& seq, const DiffractionOrder& order);

} // namespace mwm

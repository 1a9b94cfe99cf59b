// pulses.cpp
#include "mwm/pulses.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mwm/errors.hpp"

namespace mwm {
namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_pulses(const std::vector<Pulse>& pulses) {
  if (pulses.empty()) throw ConfigError("pulse sequence: empty");
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    const Pulse& p = pulses[i];
    if (p.theta_rad < 0.0 || p.theta_rad > 2.0 * kPi)
      throw ConfigError("pulse sequence: pulse area must be in [0, 2 pi]");
    if (i > 0 && !(p.t_ps > pulses[i - 1].t_ps))
      throw ConfigError("pulse sequence: times must be strictly increasing");
  }
}

} // namespace

PulseSequence::PulseSequence(std::vector<Pulse> pulses, SequenceMode mode)
    : pulses_(std::move(pulses)), mode_(mode) {
  validate_pulses(pulses_);
  if (mode_ == SequenceMode::WeakThreePulse && pulses_.size() != 3)
    throw ConfigError("weak three-pulse sequence: exactly 3 pulses required");
}

PulseSequence PulseSequence::pi_train(double t0_ps, std::vector<double> pi_times_ps,
                                      double theta0_rad) {
  std::vector<Pulse> pulses;
  pulses.push_back({t0_ps, theta0_rad, 0});
  int label = 1;
  for (double t : pi_times_ps) pulses.push_back({t, kPi, label++});
  return PulseSequence(std::move(pulses), SequenceMode::PiTrain);
}

PulseSequence PulseSequence::pi_train_uniform(double t0_ps, int m_pulses, double interval_ps,
                                              double theta0_rad, double last_interval_ps) {
  if (m_pulses < 0) throw ConfigError("pi train: pulse count must be >= 0");
  if (m_pulses > 0 && !(interval_ps > 0.0))
    throw ConfigError("pi train: interval must be > 0");
  std::vector<double> times;
  double t = t0_ps;
  for (int m = 0; m < m_pulses; ++m) {
    const bool last = (m == m_pulses - 1);
    t += (last && last_interval_ps > 0.0) ? last_interval_ps : interval_ps;
    times.push_back(t);
  }
  return pi_train(t0_ps, std::move(times), theta0_rad);
}

PulseSequence PulseSequence::weak_three(const std::array<double, 3>& times_ps,
                                        const std::array<double, 3>& thetas_rad) {
  std::vector<Pulse> pulses;
  for (int m = 0; m < 3; ++m) pulses.push_back({times_ps[m], thetas_rad[m], m});
  return PulseSequence(std::move(pulses), SequenceMode::WeakThreePulse);
}

std::vector<double> PulseSequence::times() const {
  std::vector<double> out;
  out.reserve(pulses_.size());
  for (const Pulse& p : pulses_) out.push_back(p.t_ps);
  return out;
}

double PulseSequence::interval(std::size_t m) const {
  if (m + 1 >= pulses_.size()) throw std::out_of_range("PulseSequence::interval");
  return pulses_[m + 1].t_ps - pulses_[m].t_ps;
}

std::string DiffractionOrder::label() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t m = coeffs.size(); m-- > 0;) {
    const int n = coeffs[m];
    if (n == 0) continue;
    if (n > 0 && !first) os << "+";
    if (n == -1) os << "-";
    else if (n != 1) os << n;
    os << "k" << m;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

DiffractionOrder phase_matching_direction(int m_pulses) {
  if (m_pulses < 0) throw std::invalid_argument("phase_matching_direction: M >= 0 required");
  const int outer = (m_pulses % 2 == 0) ? 1 : -1;
  DiffractionOrder order;
  order.coeffs.assign(static_cast<std::size_t>(m_pulses) + 1, 0);
  order.coeffs[0] = outer;
  int sign = -1;  // (-1)^m starting at m = 1
  for (int m = 1; m <= m_pulses; ++m, sign = -sign)
    order.coeffs[static_cast<std::size_t>(m)] = outer * 2 * sign;
  return order;
}

const std::array<WeakOrder, 9>& enumerate_weak_orders() {
  static const std::array<WeakOrder, 9> orders = {{
      {{{1, 0, 0}}, {-1, -1, -1}, +1, +1},    // k0: free induction
      {{{0, 1, 0}}, {-1, -1, 0}, +1, 0},      // k1
      {{{0, 0, 1}}, {-1, 0, 0}, 0, 0},        // k2
      {{{-1, 2, 0}}, {-1, -1, +1}, +1, -1},   // 2k1 - k0
      {{{-1, 0, 2}}, {-1, +1, +1}, -1, -1},   // 2k2 - k0: four-wave echo
      {{{0, -1, 2}}, {-1, +1, 0}, -1, 0},     // 2k2 - k1
      {{{1, -1, 1}}, {-1, 0, -1}, 0, +1},     // k2 - k1 + k0
      {{{-1, 1, 1}}, {-1, 0, +1}, 0, -1},     // k2 + k1 - k0
      {{{1, -2, 2}}, {-1, +1, -1}, -1, +1},   // 2k2 - 2k1 + k0: six-wave echo
  }};
  return orders;
}

EchoTime echo_time(const PulseSequence& seq, const DiffractionOrder& order) {
  if (seq.mode() == SequenceMode::PiTrain) {
    const int m = seq.control_count();
    if (!(order == phase_matching_direction(m)))
      throw NoEchoError("echo_time: order does not match the train's phase-matching direction");
    if (m == 0)
      throw NoEchoError("echo_time: free induction (" + order.label() + ") never rephases");
    // tau(t) = (t - t_M) + (-1)^M sum_m (-1)^m Delta_m vanishes at
    // t* = t_M - (-1)^M sum (-1)^m Delta_m.
    double alt = 0.0;
    double sign = 1.0;
    for (int i = 0; i < m; ++i, sign = -sign) alt += sign * seq.interval(static_cast<std::size_t>(i));
    const double parity = (m % 2 == 0) ? 1.0 : -1.0;
    const double t_star = seq.t_last() - parity * alt;
    return {t_star, t_star < seq.t_last()};
  }

  for (const WeakOrder& wo : enumerate_weak_orders()) {
    if (!(wo.order == order)) continue;
    // Orders whose argument is pinned to a pulse arrival never rephase.
    if ((wo.d1 == 1 && wo.d0 == 1) || (wo.d1 == 1 && wo.d0 == 0) ||
        (wo.d1 == 0 && wo.d0 == 0)) {
      throw NoEchoError("echo_time: order " + order.label() + " never rephases");
    }
    const double d0 = seq.interval(0), d1 = seq.interval(1);
    const double t_star = seq.t_last() - wo.d1 * d1 - wo.d0 * d0;
    return {t_star, t_star < seq.t_last()};
  }
  throw NoEchoError("echo_time: unknown diffraction order " + order.label());
}

} // namespace mwm

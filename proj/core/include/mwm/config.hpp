// config.hpp — Sectioned key-value run configuration
//
// Grammar: '[section]' headers, 'key = value' lines, '#' comments, blank
// lines ignored. Angles are given as multiples of pi, energies in meV,
// times in ps. Unknown sections or keys are errors. See the README for the
// full key reference.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mwm/fit.hpp"
#include "mwm/pulses.hpp"
#include "mwm/signals.hpp"
#include "mwm/spectral.hpp"

namespace mwm {

struct RunConfig {
  SpectralDensity reservoir = SpectralDensity::ohmic(0.1, 8.0);
  double temperature_k = 10.0;
  EnsembleSpec ensemble{};

  SequenceMode pulse_mode = SequenceMode::PiTrain;
  double theta0_over_pi = 0.5;
  // pi-train layout
  double t0_ps = 0.0;
  double interval_ps = 0.2;
  double last_interval_ps = 0.0;  // 0 = same as interval
  int m_pulses = 1;
  std::vector<int> m_list;  // per-curve pulse counts for the signal command
  // weak three-pulse layout
  double t1_ps = 0.1;
  double t2_ps = 0.2;
  double theta1_over_pi = 0.5;
  double theta2_over_pi = 0.5;

  // time grid for time-resolved output
  double t_start_ps = 0.0;
  double t_end_ps = 2.0;
  double t_step_ps = 0.001;
  std::vector<double> t1_list_ps;  // sweep grid
  std::vector<double> temps_k;     // sweep temperatures; empty = [temperature_k]
  double t_upper_ps = 0.0;         // integration window; 0 = auto

  QuadConfig quad{};

  std::string out_dir = "out";
  std::string prefix = "mwm";

  // oracle-check settings
  int oracle_n_cut = 0;  // 0 = auto
  double oracle_tol = 1e-6;
  std::vector<double> oracle_temps_k{0.0, 10.0, 100.0};
  bool oracle_corrupt_sign = false;  // test hook: negate one phase function

  // fit settings
  std::vector<FitProblem::FreeParam> fit_params;
  std::string fit_data_4wm;
  std::string fit_data_6wm;
  int fit_starts = 8;
  std::uint64_t seed = 0;

  PulseSequence make_sequence() const;
  PulseSequence make_pi_train(int m) const;
};

/// Parse and validate. Throws ConfigError naming the offending field and line.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");

/// "a,b,c" or "start:step:stop" inclusive range.
std::vector<double> parse_number_list(const std::string& text);

} // namespace mwm

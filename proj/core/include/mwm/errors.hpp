// errors.hpp — Exception types shared across the library
#pragma once

#include <stdexcept>
#include <string>

namespace mwm {

/// Invalid or inconsistent user configuration (bad field, missing file, ...).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed to reach its accuracy target. Carries the best
/// value obtained so far and the achieved error estimate.
class NumericError : public std::runtime_error {
public:
  NumericError(const std::string& what, double partial, double error_estimate)
      : std::runtime_error(what), partial_result(partial), error_bound(error_estimate) {}
  double partial_result;
  double error_bound;
};

/// The truncated Fock space is too small for the requested evolution.
class CutoffError : public std::runtime_error {
public:
  explicit CutoffError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested an echo time for a diffraction order that never rephases.
class NoEchoError : public std::runtime_error {
public:
  explicit NoEchoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mwm

// runner.hpp — Command implementations behind the CLI subcommands
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mwm/config.hpp"
#include "mwm/parallel.hpp"

namespace mwm {

struct CommandResult {
  std::vector<std::string> files_written;
  int exit_code = 0;
};

CommandResult cmd_gamma(const RunConfig& cfg, int jobs, std::ostream& log);
CommandResult cmd_signal(const RunConfig& cfg, int jobs, std::ostream& log);
CommandResult cmd_sweep(const RunConfig& cfg, int jobs, std::ostream& log);
CommandResult cmd_oracle_check(const RunConfig& cfg, int jobs, std::ostream& log);
CommandResult cmd_fit(const RunConfig& cfg, int jobs, std::ostream& log);
/// Emits a gnuplot script referencing the CSVs a signal/sweep run produces.
CommandResult cmd_gnuplot(const RunConfig& cfg, std::ostream& log);

// CLI exit codes: 0 ok, 2 config error, 3 numeric error, 4 verification breach.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitBreach = 4;

} // namespace mwm

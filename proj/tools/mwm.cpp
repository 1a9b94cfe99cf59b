// mwm.cpp — command-line front end
//
//   mwm gamma|signal|sweep|oracle-check|fit|gnuplot --config <path> [--jobs N] [--out DIR]
//
// Exit codes: 0 ok, 2 config error, 3 numeric error, 4 verification breach.
#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "mwm/errors.hpp"
#include "mwm/runner.hpp"

namespace {

struct Args {
  std::string config_path;
  int jobs = 0;  // 0 = hardware parallelism
  std::string out_dir;
};

int dispatch(const std::string& command, const Args& args) {
  mwm::RunConfig cfg;
  try {
    cfg = mwm::load_config(args.config_path);
  } catch (const mwm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return mwm::kExitConfig;
  }
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;

  mwm::CommandResult result;
  if (command == "gamma") result = mwm::cmd_gamma(cfg, args.jobs, std::cout);
  else if (command == "signal") result = mwm::cmd_signal(cfg, args.jobs, std::cout);
  else if (command == "sweep") result = mwm::cmd_sweep(cfg, args.jobs, std::cout);
  else if (command == "oracle-check") result = mwm::cmd_oracle_check(cfg, args.jobs, std::cout);
  else if (command == "fit") result = mwm::cmd_fit(cfg, args.jobs, std::cout);
  else if (command == "gnuplot") result = mwm::cmd_gnuplot(cfg, std::cout);
  return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiwave-mixing echo signal simulator"};
  app.require_subcommand(1);

  Args args;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "run configuration file")->required();
    sub->add_option("--jobs", args.jobs, "worker threads (default: hardware parallelism)");
    sub->add_option("--out", args.out_dir, "output directory (overrides [output] dir)");
  };

  add_common(app.add_subcommand("gamma", "dephasing exponent curves"));
  add_common(app.add_subcommand("signal", "time-resolved intensity curves"));
  add_common(app.add_subcommand("sweep", "integrated intensities vs first-pulse time"));
  add_common(app.add_subcommand("oracle-check", "dense-oracle verification of the expansion"));
  add_common(app.add_subcommand("fit", "reservoir parameter estimation"));
  add_common(app.add_subcommand("gnuplot", "emit a gnuplot script for the run's CSVs"));

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return dispatch(command, args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mwm::kExitNumeric;
  }
}

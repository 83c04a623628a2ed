#pragma once

// Subcommand drivers. Each writes its outputs plus config.json (the resolved
// configuration) into cfg.output and returns a process exit code.

#include <exception>
#include <iostream>

#include "gpmag/config.hpp"

namespace gpmag {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,      // I/O problems, violated property suites
  kExitConfig = 2,       // invalid configuration or violated hypothesis
  kExitNumerical = 3,    // non-finite values, numerical breakdown
  kExitNotConverged = 4,
};

int cmd_gauge(const RunConfig& cfg);
int cmd_minimize(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_experiment(const RunConfig& cfg);

/// Dispatches on cfg.command and maps exceptions to exit codes, printing the
/// message to stderr.
int run_command(const RunConfig& cfg);

/// Runs fn, mapping ConfigError to 2, NumericalError to 3 and other errors to 1.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace gpmag

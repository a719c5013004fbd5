#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "gaugekit/scenario_config.hpp"

namespace gaugekit {

enum ExitCode : int { exit_ok = 0, exit_internal = 1, exit_config = 2, exit_invariant = 3 };

struct RunOptions {
  /// Highest-priority output directory (the --out flag).
  std::optional<std::string> out_dir;
  int threads = 1;
};

/// --out, then GAUGEKIT_OUT, then output_dir from the config, then "gaugekit_out".
std::filesystem::path resolve_output_dir(const ScenarioConfig& config, const RunOptions& options);

/// Runs fn(0..count-1) on up to `threads` workers. The first exception is rethrown after all
/// workers finish.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Label used in per-gauge file names, e.g. 0.25 -> "0.25".
std::string alpha_label(double alpha);

/// Executes a circuit, dipole or lineshape scenario (verify scenarios are forwarded to the
/// verification suite). Throws ConfigError or InvariantError.
void run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir, int threads,
                  std::ostream& log);

/// CLI entry points. Errors are reported on err as a JSON object and mapped to exit codes.
int run_command(const std::string& config_path, const RunOptions& options, std::ostream& log, std::ostream& err);
int verify_command(const std::optional<std::string>& config_path, const RunOptions& options, std::ostream& log,
                   std::ostream& err);

}  // namespace gaugekit

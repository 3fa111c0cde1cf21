#pragma once

#include <iosfwd>
#include <string>

#include "drsubmax/config.hpp"

namespace drsubmax {

/// 17 significant digits: round-trips a 64-bit float exactly, so re-running a
/// command reproduces the CSV byte for byte.
std::string fmt17(double v);

/// The CLI commands, separated from the binary so tests can drive them.
/// Each writes a fixed-header CSV (plus '#'-prefixed summary lines) to the
/// stream.  Errors are reported by exception; run_command translates them to
/// exit codes.
void cmd_offline(const ExperimentConfig& config, std::ostream& out);
void cmd_online(const ExperimentConfig& config, std::ostream& out);
void cmd_sweep(const ExperimentConfig& config, std::ostream& out, int jobs);
void cmd_baseline(const ExperimentConfig& config, std::ostream& out);

/// Loads the config, dispatches on the subcommand, writes the CSV to
/// out_path ("-" or empty for stdout).  Returns 0 on success, 1 for config
/// errors, 2 for runtime failures; messages go to the error stream.
int run_command(const std::string& subcommand, const std::string& config_path,
                const std::string& out_path, const std::string& seeds_override,
                int jobs, std::ostream& err);

}  // namespace drsubmax

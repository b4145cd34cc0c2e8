#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "emhd1d/config.hpp"

namespace emhd1d {

enum ExitCode : int { kPass = 0, kToleranceFailure = 1, kConfigError = 2, kNumericalAbort = 3 };

struct CommandOptions {
  std::string command;  ///< run | blowup | symmetry | lp | selftest
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> sweep;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
};

/// Loads the config, applies overrides and dispatches, fanning out over the
/// sweep file when one is given. Never throws; errors map to exit codes.
int run_command(const CommandOptions& opts, std::ostream& log);

/// Each command writes into cfg.output_directory.
int cmd_run(const RunConfig& cfg, std::ostream& log);
int cmd_blowup(const RunConfig& cfg, std::ostream& log);
int cmd_symmetry(const RunConfig& cfg, std::ostream& log);
int cmd_lp(const RunConfig& cfg, std::ostream& log);
int cmd_selftest(const RunConfig& cfg, std::ostream& log);

/// Key defaults a command applies beneath the config file's own keys
/// (the blowup command defaults to N = 4096).
std::map<std::string, std::string> command_defaults(const std::string& command);

/// Sweep file: one job per non-empty line, each a whitespace-separated list
/// of key=value overrides.
std::vector<std::vector<std::string>> read_sweep(const std::filesystem::path& path);

/// Worker count for sweeps: EMHD1D_THREADS when set, else hardware concurrency.
unsigned sweep_threads(std::size_t jobs);

}  // namespace emhd1d

#pragma once

#include <string>
#include <vector>

#include "ettrack/cli/config.hpp"

namespace ettrack::cli {

// Exit codes shared by all subcommands:
//   0 success, 1 config/CLI parse error, 2 simulation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitSimulationError = 2;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  CliOverrides overrides;
};

// Simulate and write trajectory.csv, events.csv, metrics.json, figure.svg.
int cmd_run(const CommonArgs& args);

// Analytic guarantees only (no simulation): prints the applicable
// inter-execution bounds and writes bounds.json.
int cmd_bounds(const CommonArgs& args);

// Tightening- vs frozen-ledger ablation: two runs, side-by-side metrics,
// compare.json plus full outputs per mode.
int cmd_compare(const CommonArgs& args);

// Independent scenarios in parallel, one worker and one output directory
// per config. Returns the worst per-scenario exit code.
int cmd_batch(const std::vector<std::string>& config_paths,
              const std::string& out_root, const CliOverrides& overrides);

// Argument parsing + dispatch for the `ettrack` binary.
int dispatch(int argc, const char* const* argv);

}  // namespace ettrack::cli

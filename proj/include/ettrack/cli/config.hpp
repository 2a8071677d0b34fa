#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "ettrack/core/lyapunov.hpp"
#include "ettrack/sim/scenario.hpp"
#include "ettrack/systems/lipschitz_estimation.hpp"

namespace ettrack::cli {

// Flat `key = value` text with dotted section names, '#' comments, blank
// lines ignored. Keys are validated against the documented set; unknown or
// duplicate keys are ConfigErrors so typos fail loudly.
struct KeyValueConfig {
  std::map<std::string, std::string> values;
  std::string source;  // path or synthetic name, for error messages
};

[[nodiscard]] KeyValueConfig parse_config_text(const std::string& text,
                                               const std::string& source);
[[nodiscard]] KeyValueConfig parse_config_file(const std::string& path);

// Command-line overrides applied on top of the file.
struct CliOverrides {
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<bool> invariant_checks;
  std::optional<std::string> ledger_mode;  // "tightening" | "frozen"
};

// A scenario plus the pieces the CLI layer needs beyond the run itself: the
// quadratic certificate (for the weighted-trigger trace in figures), the
// matrices it came from, and the sampling settings for bound assembly.
struct BuiltScenario {
  sim::Scenario scenario;
  core::QuadraticLyapunov quadratic;
  Mat closed_loop_A;
  Mat H;
  Mat B;
  int bound_samples = 100000;
  std::uint64_t bound_seed = 1;
  std::optional<systems::LipschitzConstants> growth_overrides;
};

[[nodiscard]] BuiltScenario build_scenario(const KeyValueConfig& config,
                                           const CliOverrides& overrides);

}  // namespace ettrack::cli

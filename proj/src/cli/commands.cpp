#include "ettrack/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ettrack/bounds/bounds.hpp"
#include "ettrack/cli/emit.hpp"
#include "ettrack/errors.hpp"
#include "ettrack/sim/simulator.hpp"

namespace fs = std::filesystem;

namespace ettrack::cli {

namespace {

const char* ledger_mode_name(const sim::Scenario& scenario) {
  return scenario.freeze_ledger ? "frozen" : "tightening";
}

// All artifacts of one run. Called only after the simulation finished, so a
// failed run leaves no partial output behind.
void write_run_artifacts(const std::string& dir, const BuiltScenario& built,
                         const sim::RunResult& result) {
  fs::create_directories(dir);
  write_trajectory_csv((fs::path(dir) / "trajectory.csv").string(), result.trajectory);
  write_events_csv((fs::path(dir) / "events.csv").string(), result.events);
  write_text_file(
      (fs::path(dir) / "metrics.json").string(),
      metrics_json(result.metrics, built, ledger_mode_name(built.scenario)).dump(2) + "\n");
  const double w_scale = 2.0 * built.quadratic.norm_PB /
                         (built.scenario.trigger.sigma * built.quadratic.a);
  write_figure_svg((fs::path(dir) / "figure.svg").string(), result.trajectory,
                   result.metrics.r, result.metrics.r1, w_scale, built.scenario.name);
}

int report_failure(const char* command, const std::exception& e, int code) {
  std::cerr << "ettrack " << command << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int cmd_run(const CommonArgs& args) {
  try {
    const BuiltScenario built =
        build_scenario(parse_config_file(args.config_path), args.overrides);
    const sim::RunResult result = sim::run(built.scenario);
    write_run_artifacts(args.out_dir, built, result);
    std::cout << built.scenario.name << ": " << result.metrics.total_updates
              << " updates over " << format_double(result.metrics.horizon)
              << " s, min inter-exec " << format_double(result.metrics.min_inter_exec)
              << " s, ultimate bound observed "
              << format_double(result.metrics.ultimate_bound_observed) << " (r1 "
              << format_double(result.metrics.r1) << ")\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    return report_failure("run", e, kExitConfigError);
  } catch (const SimulationError& e) {
    return report_failure("run", e, kExitSimulationError);
  } catch (const std::exception& e) {
    return report_failure("run", e, kExitConfigError);
  }
}

int cmd_bounds(const CommonArgs& args) {
  try {
    const BuiltScenario built =
        build_scenario(parse_config_file(args.config_path), args.overrides);
    const sim::Scenario& scenario = built.scenario;
    const bounds::BoundInputs inputs = bounds::assemble_bound_inputs(
        scenario, built.bound_samples, built.bound_seed, built.growth_overrides);
    const std::vector<bounds::BoundReport> reports = bounds::feasibility_report(
        inputs, scenario.reference.rate_bound_c.has_value(),
        scenario.reference.dwell.has_value());

    // The smallest trigger radius that still clears the applicable jump
    // budget; only meaningful when there is a jump budget to clear.
    double budget = std::numeric_limits<double>::quiet_NaN();
    if (scenario.reference.dwell) {
      budget = scenario.reference.dwell->J_v * inputs.norm_M0;
    } else if (!scenario.reference.rate_bound_c && scenario.reference.d_v) {
      budget = 2.0 * (*scenario.reference.d_v) * inputs.norm_M0;
    }
    double min_radius = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(budget)) {
      min_radius = bounds::min_feasible_radius(budget, inputs.mu0, inputs.sigma,
                                               scenario.certificate.alpha3,
                                               scenario.certificate.beta);
    }

    nlohmann::json doc;
    doc["scenario"] = scenario.name;
    doc["inputs"] = bound_inputs_json(inputs);
    doc["reports"] = nlohmann::json::array();
    for (const auto& report : reports) {
      doc["reports"].push_back(bound_report_json(report));
    }
    doc["min_feasible_radius"] = min_radius;

    fs::create_directories(args.out_dir);
    write_text_file((fs::path(args.out_dir) / "bounds.json").string(), doc.dump(2) + "\n");

    for (const auto& report : reports) {
      std::cout << scenario.name << " [" << bounds::to_string(report.input_class) << "] ";
      if (report.feasible) {
        std::cout << "inter-execution time >= " << format_double(report.T_lower) << " s\n";
      } else {
        std::cout << "infeasible: " << report.note << "\n";
      }
    }
    if (std::isfinite(min_radius)) {
      std::cout << scenario.name << " minimum viable trigger radius "
                << format_double(min_radius) << "\n";
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    return report_failure("bounds", e, kExitConfigError);
  } catch (const SimulationError& e) {
    return report_failure("bounds", e, kExitSimulationError);
  } catch (const std::exception& e) {
    return report_failure("bounds", e, kExitConfigError);
  }
}

int cmd_compare(const CommonArgs& args) {
  try {
    const KeyValueConfig config = parse_config_file(args.config_path);

    CliOverrides tightening_overrides = args.overrides;
    tightening_overrides.ledger_mode = "tightening";
    const BuiltScenario built_tightening = build_scenario(config, tightening_overrides);

    CliOverrides frozen_overrides = args.overrides;
    frozen_overrides.ledger_mode = "frozen";
    BuiltScenario built_frozen = build_scenario(config, frozen_overrides);
    // A frozen conservative ledger fires near every step by design; lift the
    // burst safeguard so the ablation leg can run to its horizon.
    built_frozen.scenario.sim.zeno_max_events =
        std::max(built_frozen.scenario.sim.zeno_max_events, 1000000);

    const sim::RunResult tightening = sim::run(built_tightening.scenario);
    const sim::RunResult frozen = sim::run(built_frozen.scenario);

    write_run_artifacts((fs::path(args.out_dir) / "tightening").string(),
                        built_tightening, tightening);
    write_run_artifacts((fs::path(args.out_dir) / "frozen").string(), built_frozen,
                        frozen);

    const double ratio = frozen.metrics.avg_freq_total / tightening.metrics.avg_freq_total;
    nlohmann::json doc;
    doc["scenario"] = built_tightening.scenario.name;
    doc["tightening"] = metrics_json(tightening.metrics, built_tightening, "tightening");
    doc["frozen"] = metrics_json(frozen.metrics, built_frozen, "frozen");
    doc["frequency_ratio"] = ratio;
    write_text_file((fs::path(args.out_dir) / "compare.json").string(), doc.dump(2) + "\n");

    std::cout << built_tightening.scenario.name << ": tightening "
              << tightening.metrics.total_updates << " updates, frozen "
              << frozen.metrics.total_updates << " updates, frequency ratio "
              << format_double(ratio) << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    return report_failure("compare", e, kExitConfigError);
  } catch (const SimulationError& e) {
    return report_failure("compare", e, kExitSimulationError);
  } catch (const std::exception& e) {
    return report_failure("compare", e, kExitConfigError);
  }
}

int cmd_batch(const std::vector<std::string>& config_paths, const std::string& out_root,
              const CliOverrides& overrides) {
  if (config_paths.empty()) {
    std::cerr << "ettrack batch: no config files given\n";
    return kExitConfigError;
  }
  std::vector<int> codes(config_paths.size(), kExitOk);
  std::vector<std::thread> workers;
  workers.reserve(config_paths.size());
  for (std::size_t i = 0; i < config_paths.size(); ++i) {
    workers.emplace_back([&codes, &config_paths, &out_root, &overrides, i] {
      CommonArgs args;
      args.config_path = config_paths[i];
      args.out_dir = (fs::path(out_root) / fs::path(config_paths[i]).stem()).string();
      args.overrides = overrides;
      codes[i] = cmd_run(args);
    });
  }
  for (auto& worker : workers) {
    worker.join();
  }
  return *std::max_element(codes.begin(), codes.end());
}

namespace {

struct SubcommandOptions {
  std::string config;
  std::string positional;
  std::string out = "out";
  double dt = 0.0;
  double horizon = 0.0;
  bool no_checks = false;
  std::string ledger;
};

void add_override_options(CLI::App* sub, SubcommandOptions& opts) {
  sub->add_option("--dt", opts.dt, "override the integration step sim.dt");
  sub->add_option("--horizon", opts.horizon, "override the horizon sim.horizon");
  sub->add_flag("--no-checks", opts.no_checks, "disable the runtime certificate checks");
  sub->add_option("--ledger", opts.ledger, "ledger mode: tightening | frozen");
}

void add_common_options(CLI::App* sub, SubcommandOptions& opts) {
  sub->add_option("--config,-c", opts.config, "scenario config file");
  sub->add_option("config_file", opts.positional, "scenario config file (positional)");
  sub->add_option("--out,-o", opts.out, "output directory");
  add_override_options(sub, opts);
}

// `ettrack run case1` finds scenarios/case1.cfg style shorthand: a missing
// path gains the .cfg extension when that file exists.
std::string resolve_config_path(const std::string& path) {
  if (!path.empty() && !fs::exists(path)) {
    const std::string with_extension = path + ".cfg";
    if (fs::exists(with_extension)) {
      return with_extension;
    }
  }
  return path;
}

void fill_overrides(const CLI::App* sub, const SubcommandOptions& opts,
                    CliOverrides& overrides) {
  if (sub->count("--dt") > 0) {
    overrides.dt = opts.dt;
  }
  if (sub->count("--horizon") > 0) {
    overrides.horizon = opts.horizon;
  }
  if (opts.no_checks) {
    overrides.invariant_checks = false;
  }
  if (!opts.ledger.empty()) {
    overrides.ledger_mode = opts.ledger;
  }
}

bool extract_args(const CLI::App* sub, const SubcommandOptions& opts, CommonArgs& args) {
  args.config_path =
      resolve_config_path(!opts.config.empty() ? opts.config : opts.positional);
  args.out_dir = opts.out;
  fill_overrides(sub, opts, args.overrides);
  if (args.config_path.empty()) {
    std::cerr << "ettrack: no config file given (pass --config or a positional path)\n";
    return false;
  }
  return true;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Deterministic simulation and certification toolkit for "
               "event-triggered trajectory tracking"};
  app.require_subcommand(1);

  SubcommandOptions run_opts;
  CLI::App* run_cmd =
      app.add_subcommand("run", "simulate a scenario and write its artifact set");
  add_common_options(run_cmd, run_opts);

  SubcommandOptions bounds_opts;
  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", "compute the analytic inter-execution guarantees (no simulation)");
  add_common_options(bounds_cmd, bounds_opts);

  SubcommandOptions compare_opts;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "tightening- vs frozen-ledger ablation on one scenario");
  add_common_options(compare_cmd, compare_opts);

  SubcommandOptions batch_opts;
  std::vector<std::string> batch_configs;
  CLI::App* batch_cmd =
      app.add_subcommand("batch", "run several scenarios in parallel, one directory each");
  batch_cmd->add_option("config_files", batch_configs, "scenario config files")
      ->required();
  batch_cmd->add_option("--out,-o", batch_opts.out, "output root directory");
  add_override_options(batch_cmd, batch_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  if (run_cmd->parsed()) {
    CommonArgs args;
    return extract_args(run_cmd, run_opts, args) ? cmd_run(args) : kExitConfigError;
  }
  if (bounds_cmd->parsed()) {
    CommonArgs args;
    return extract_args(bounds_cmd, bounds_opts, args) ? cmd_bounds(args)
                                                       : kExitConfigError;
  }
  if (compare_cmd->parsed()) {
    CommonArgs args;
    return extract_args(compare_cmd, compare_opts, args) ? cmd_compare(args)
                                                         : kExitConfigError;
  }
  if (batch_cmd->parsed()) {
    CliOverrides overrides;
    fill_overrides(batch_cmd, batch_opts, overrides);
    std::vector<std::string> resolved;
    resolved.reserve(batch_configs.size());
    for (const auto& path : batch_configs) {
      resolved.push_back(resolve_config_path(path));
    }
    return cmd_batch(resolved, batch_opts.out, overrides);
  }
  return kExitConfigError;
}

}  // namespace ettrack::cli

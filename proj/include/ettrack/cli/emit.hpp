#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ettrack/bounds/bounds.hpp"
#include "ettrack/cli/config.hpp"
#include "ettrack/sim/simulator.hpp"

namespace ettrack::cli {

// Shortest round-trip decimal form (via std::to_chars).
[[nodiscard]] std::string format_double(double value);

// Columns: t, x1..xn, xd1..xdn, v (v1..vq if q > 1), xt1..xtn, u (u1..um if
// m > 1), V, normxt, trigger_g.
void write_trajectory_csv(const std::string& path, const sim::TrajectoryLog& log);

// Columns: i, t_i, normxt_i, L1..L_{2n+q}, reason.
void write_events_csv(const std::string& path, const sim::EventLog& events);

[[nodiscard]] nlohmann::json metrics_json(const sim::Metrics& metrics,
                                          const BuiltScenario& built,
                                          const std::string& ledger_mode);

[[nodiscard]] nlohmann::json bound_report_json(const bounds::BoundReport& report);
[[nodiscard]] nlohmann::json bound_inputs_json(const bounds::BoundInputs& in);

// Static SVG: ||x_tilde|| and the weighted trigger error W^T|e| over time,
// with the quiet radius r and ultimate bound r1 as horizontal rules.
// w_scale converts the logged trigger function into the weighted trace:
// W^T|e| = w_scale * g + ||x_tilde|| for the quadratic certificate.
void write_figure_svg(const std::string& path, const sim::TrajectoryLog& log,
                      double r, double r1, double w_scale, const std::string& title);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ettrack::cli

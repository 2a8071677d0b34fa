#include "ettrack/cli/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "ettrack/errors.hpp"

namespace ettrack::cli {

namespace {

// NaN keeps its JSON-side convention (null) via nlohmann; in CSV it prints
// as the literal "nan".
void append_double(std::string& out, double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  out.append(buffer, result.ptr);
}

void append_header_block(std::string& out, const char* stem, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    out += ',';
    out += stem;
    if (count > 1) {
      out += std::to_string(i + 1);
    }
  }
}

void append_indexed_block(std::string& out, const char* stem, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    out += ',';
    out += stem;
    out += std::to_string(i + 1);
  }
}

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

void append_svg_coord(std::string& out, double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  out += buffer;
}

}  // namespace

std::string format_double(double value) {
  std::string out;
  append_double(out, value);
  return out;
}

void write_trajectory_csv(const std::string& path, const sim::TrajectoryLog& log) {
  const Eigen::Index n = log.x.cols();
  const Eigen::Index q = log.v.cols();
  const Eigen::Index m = log.u.cols();

  std::string text;
  text.reserve(static_cast<std::size_t>(log.rows() + 1) * 24 *
               static_cast<std::size_t>(2 * n + q + m + 4));
  text += 't';
  append_indexed_block(text, "x", n);
  append_indexed_block(text, "xd", n);
  append_header_block(text, "v", q);
  append_indexed_block(text, "xt", n);
  append_header_block(text, "u", m);
  text += ",V,normxt,trigger_g\n";

  for (Eigen::Index k = 0; k < log.rows(); ++k) {
    append_double(text, log.t(k));
    for (Eigen::Index j = 0; j < n; ++j) {
      text += ',';
      append_double(text, log.x(k, j));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      text += ',';
      append_double(text, log.x_d(k, j));
    }
    for (Eigen::Index j = 0; j < q; ++j) {
      text += ',';
      append_double(text, log.v(k, j));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      text += ',';
      append_double(text, log.x_tilde(k, j));
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      text += ',';
      append_double(text, log.u(k, j));
    }
    text += ',';
    append_double(text, log.V(k));
    text += ',';
    append_double(text, log.norm_xt(k));
    text += ',';
    append_double(text, log.g(k));
    text += '\n';
  }
  write_text_file(path, text);
}

void write_events_csv(const std::string& path, const sim::EventLog& events) {
  const Eigen::Index ledger_dim = events.empty() ? 0 : events.front().L.size();
  std::string text = "i,t_i,normxt_i";
  append_indexed_block(text, "L", ledger_dim);
  text += ",reason\n";
  for (const auto& event : events) {
    text += std::to_string(event.index);
    text += ',';
    append_double(text, event.t);
    text += ',';
    append_double(text, event.norm_xt);
    for (Eigen::Index j = 0; j < event.L.size(); ++j) {
      text += ',';
      append_double(text, event.L(j));
    }
    text += ',';
    text += sim::to_string(event.reason);
    text += '\n';
  }
  write_text_file(path, text);
}

nlohmann::json metrics_json(const sim::Metrics& metrics, const BuiltScenario& built,
                            const std::string& ledger_mode) {
  nlohmann::json out;
  out["scenario"] = built.scenario.name;
  out["total_updates"] = metrics.total_updates;
  out["min_inter_exec"] = metrics.min_inter_exec;
  out["avg_freq_total"] = metrics.avg_freq_total;
  out["avg_freq_transient"] = metrics.avg_freq_transient;
  out["first_entry_time"] = metrics.first_entry_time;
  out["ultimate_bound_observed"] = metrics.ultimate_bound_observed;
  out["norm_xt_at_arming"] = metrics.norm_xt_at_arming;
  out["settled"] = metrics.settled;
  out["arming_counts_as_update"] = metrics.arming_counts_as_update;
  out["update_convention"] =
      "first arming counts as an update, as does every threshold crossing";
  out["r"] = metrics.r;
  out["r1"] = metrics.r1;
  out["horizon"] = metrics.horizon;
  out["dt"] = metrics.dt;
  out["ledger_mode"] = ledger_mode;
  out["invariant_checks"] = built.scenario.sim.invariant_checks;
  return out;
}

nlohmann::json bound_report_json(const bounds::BoundReport& report) {
  nlohmann::json out;
  out["guarantee_id"] = static_cast<int>(report.input_class);
  out["input_class"] = bounds::to_string(report.input_class);
  out["feasible"] = report.feasible;
  out["T_lower"] = report.T_lower;
  out["delta"] = report.delta;
  out["r1"] = report.r1;
  out["note"] = report.note;
  if (report.input_class == bounds::InputClass::BoundedOnly) {
    out["printed_numerator"] = report.printed_numerator;
    out["proof_numerator"] = report.proof_numerator;
    out["T_proof"] = report.T_proof;
  }
  return out;
}

nlohmann::json bound_inputs_json(const bounds::BoundInputs& in) {
  nlohmann::json out;
  out["sigma"] = in.sigma;
  out["r"] = in.r;
  out["norm_xt0"] = in.norm_xt0;
  out["mu0"] = in.mu0;
  out["d"] = in.d;
  out["c"] = in.c;
  out["d_v"] = in.d_v;
  out["T_v"] = in.T_v;
  out["J_v"] = in.J_v;
  out["P1"] = in.P1;
  out["P2"] = in.P2;
  out["P3"] = in.P3;
  out["norm_L0"] = in.norm_L0;
  out["norm_Q0"] = in.norm_Q0;
  out["norm_M0"] = in.norm_M0;
  out["delta"] = in.delta;
  out["r1"] = in.r1;
  out["growth_budget"] = in.growth_budget();
  out["jump_budget"] = in.J_v * in.norm_M0;
  return out;
}

void write_figure_svg(const std::string& path, const sim::TrajectoryLog& log, double r,
                      double r1, double w_scale, const std::string& title) {
  constexpr double kWidth = 960.0;
  constexpr double kHeight = 540.0;
  constexpr double kLeft = 72.0;
  constexpr double kRight = 920.0;
  constexpr double kTop = 56.0;
  constexpr double kBottom = 488.0;
  constexpr double kFloor = 1e-6;

  const Eigen::Index rows = log.rows();
  const double t_max = rows > 0 ? log.t(rows - 1) : 1.0;
  const double t_span = t_max > 0.0 ? t_max : 1.0;

  double y_max = std::max(r, r1);
  for (Eigen::Index k = 0; k < rows; ++k) {
    y_max = std::max(y_max, log.norm_xt(k));
    y_max = std::max(y_max, w_scale * log.g(k) + log.norm_xt(k));
  }
  if (!(y_max > kFloor)) {
    y_max = 1.0;
  }
  y_max *= 1.5;

  const double log_lo = std::log10(kFloor);
  const double log_hi = std::log10(y_max);
  const auto x_px = [&](double t) {
    return kLeft + (kRight - kLeft) * (t / t_span);
  };
  const auto y_px = [&](double value) {
    const double clamped = std::max(value, kFloor);
    const double frac = (std::log10(clamped) - log_lo) / (log_hi - log_lo);
    return kBottom - (kBottom - kTop) * frac;
  };

  std::string svg;
  svg.reserve(1 << 17);
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 960 540\" "
         "font-family=\"sans-serif\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"480\" y=\"30\" text-anchor=\"middle\" font-size=\"18\" "
         "fill=\"#222222\">" +
         xml_escape(title) + "</text>\n";

  // Frame.
  svg += "<rect x=\"72\" y=\"56\" width=\"848\" height=\"432\" fill=\"none\" "
         "stroke=\"#888888\"/>\n";

  // Decade grid lines and labels on the log axis.
  for (int decade = static_cast<int>(std::ceil(log_lo));
       decade <= static_cast<int>(std::floor(log_hi)); ++decade) {
    const double y = y_px(std::pow(10.0, decade));
    svg += "<line x1=\"72\" x2=\"920\" y1=\"";
    append_svg_coord(svg, y);
    svg += "\" y2=\"";
    append_svg_coord(svg, y);
    svg += "\" stroke=\"#eeeeee\"/>\n<text x=\"66\" y=\"";
    append_svg_coord(svg, y + 4.0);
    svg += "\" text-anchor=\"end\" font-size=\"11\" fill=\"#555555\">1e" +
           std::to_string(decade) + "</text>\n";
  }

  // Time ticks.
  for (int tick = 0; tick <= 5; ++tick) {
    const double t = t_span * tick / 5.0;
    const double x = x_px(t);
    svg += "<line y1=\"488\" y2=\"493\" x1=\"";
    append_svg_coord(svg, x);
    svg += "\" x2=\"";
    append_svg_coord(svg, x);
    svg += "\" stroke=\"#888888\"/>\n<text y=\"508\" text-anchor=\"middle\" "
           "font-size=\"11\" fill=\"#555555\" x=\"";
    append_svg_coord(svg, x);
    svg += "\">";
    char label[32];
    std::snprintf(label, sizeof(label), "%g", t);
    svg += label;
    svg += "</text>\n";
  }
  svg += "<text x=\"496\" y=\"530\" text-anchor=\"middle\" font-size=\"13\" "
         "fill=\"#333333\">t [s]</text>\n";

  // Horizontal rules for the quiet radius and the ultimate bound.
  const auto rule = [&](double value, const char* label, const char* color) {
    if (!(value > 0.0)) {
      return;
    }
    const double y = y_px(value);
    svg += "<line x1=\"72\" x2=\"920\" stroke-dasharray=\"6 4\" stroke=\"";
    svg += color;
    svg += "\" y1=\"";
    append_svg_coord(svg, y);
    svg += "\" y2=\"";
    append_svg_coord(svg, y);
    svg += "\"/>\n<text x=\"914\" text-anchor=\"end\" font-size=\"11\" fill=\"";
    svg += color;
    svg += "\" y=\"";
    append_svg_coord(svg, y - 4.0);
    svg += "\">";
    svg += label;
    svg += "</text>\n";
  };
  rule(r1, "r1", "#7f7f7f");
  rule(r, "r", "#2ca02c");

  const auto polyline = [&](const char* color, const std::function<double(Eigen::Index)>& f) {
    const Eigen::Index stride = std::max<Eigen::Index>(1, rows / 1600);
    svg += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"";
    svg += color;
    svg += "\" points=\"";
    bool first = true;
    for (Eigen::Index k = 0; k < rows; k += stride) {
      if (!first) {
        svg += ' ';
      }
      first = false;
      append_svg_coord(svg, x_px(log.t(k)));
      svg += ',';
      append_svg_coord(svg, y_px(f(k)));
    }
    if (rows > 0 && (rows - 1) % stride != 0) {
      svg += ' ';
      append_svg_coord(svg, x_px(log.t(rows - 1)));
      svg += ',';
      append_svg_coord(svg, y_px(f(rows - 1)));
    }
    svg += "\"/>\n";
  };
  polyline("#d62728", [&](Eigen::Index k) { return w_scale * log.g(k) + log.norm_xt(k); });
  polyline("#1f77b4", [&](Eigen::Index k) { return log.norm_xt(k); });

  // Legend.
  svg += "<line x1=\"100\" x2=\"130\" y1=\"74\" y2=\"74\" stroke=\"#1f77b4\" "
         "stroke-width=\"1.2\"/>\n"
         "<text x=\"136\" y=\"78\" font-size=\"12\" fill=\"#333333\">tracking error "
         "norm</text>\n"
         "<line x1=\"100\" x2=\"130\" y1=\"92\" y2=\"92\" stroke=\"#d62728\" "
         "stroke-width=\"1.2\"/>\n"
         "<text x=\"136\" y=\"96\" font-size=\"12\" fill=\"#333333\">weighted trigger "
         "error</text>\n";

  svg += "</svg>\n";
  write_text_file(path, svg);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + path + "' for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) {
    throw Error("failed while writing '" + path + "'");
  }
}

}  // namespace ettrack::cli

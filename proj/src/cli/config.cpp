#include "ettrack/cli/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ettrack/errors.hpp"
#include "ettrack/sim/simulator.hpp"
#include "ettrack/systems/reference_signal.hpp"
#include "ettrack/systems/spring.hpp"
#include "ettrack/trigger/trigger.hpp"

namespace ettrack::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Every key build_scenario understands; anything else is a loud typo.
constexpr std::array<const char*, 22> kKnownKeys = {
    "scenario.name",    "model.kind",      "model.K",          "model.H",
    "trigger.sigma",    "trigger.r",       "trigger.target_r1", "reference.kind",
    "reference.d",      "reference.d1",    "plant.x0",          "sim.dt",
    "sim.horizon",      "sim.zeno_guard",  "sim.zeno_window",   "sim.checks",
    "ledger.mode",      "bounds.samples",  "bounds.seed",       "bounds.P1",
    "bounds.P2",        "bounds.P3"};

class ConfigReader {
 public:
  explicit ConfigReader(const KeyValueConfig& config) : config_(config) {}

  [[nodiscard]] const std::string* find(const std::string& key) const {
    const auto it = config_.values.find(key);
    return it == config_.values.end() ? nullptr : &it->second;
  }

  [[nodiscard]] bool has(const std::string& key) const { return find(key) != nullptr; }

  [[nodiscard]] std::string get_string(const std::string& key,
                                       const std::string& fallback) const {
    const auto* value = find(key);
    return value ? *value : fallback;
  }

  [[nodiscard]] double get_double(const std::string& key, double fallback) const {
    const auto* value = find(key);
    return value ? parse_double(key, *value) : fallback;
  }

  [[nodiscard]] long get_long(const std::string& key, long fallback) const {
    const auto* value = find(key);
    if (!value) {
      return fallback;
    }
    const std::string text = trim(*value);
    char* end = nullptr;
    errno = 0;
    const long parsed = std::strtol(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
      fail(key, *value, "an integer");
    }
    return parsed;
  }

  [[nodiscard]] std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto* value = find(key);
    if (!value) {
      return fallback;
    }
    const std::string text = trim(*value);
    char* end = nullptr;
    errno = 0;
    const unsigned long long parsed = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || text[0] == '-' || end != text.c_str() + text.size() ||
        errno == ERANGE) {
      fail(key, *value, "an unsigned integer");
    }
    return static_cast<std::uint64_t>(parsed);
  }

  [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const {
    const auto* value = find(key);
    if (!value) {
      return fallback;
    }
    std::string text = trim(*value);
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (text == "1" || text == "true" || text == "on" || text == "yes") {
      return true;
    }
    if (text == "0" || text == "false" || text == "off" || text == "no") {
      return false;
    }
    fail(key, *value, "a boolean (true/false, on/off, yes/no, 1/0)");
  }

  [[nodiscard]] Vec get_vec(const std::string& key) const {
    const auto* value = find(key);
    if (!value) {
      fail_missing(key);
    }
    std::istringstream stream(*value);
    std::vector<double> entries;
    double entry = 0.0;
    while (stream >> entry) {
      entries.push_back(entry);
    }
    std::string leftover;
    if ((stream >> leftover) || entries.empty()) {
      fail(key, *value, "a whitespace-separated list of numbers");
    }
    Vec v(static_cast<Eigen::Index>(entries.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v(i) = entries[static_cast<std::size_t>(i)];
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& value,
                         const std::string& expected) const {
    throw ConfigError(config_.source + ": key '" + key + "' has value '" + value +
                      "', expected " + expected);
  }

  [[noreturn]] void fail_missing(const std::string& key) const {
    throw ConfigError(config_.source + ": required key '" + key + "' is missing");
  }

  [[nodiscard]] double parse_double(const std::string& key, const std::string& value) const {
    const std::string text = trim(value);
    char* end = nullptr;
    errno = 0;
    const double parsed = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(parsed)) {
      fail(key, value, "a finite number");
    }
    return parsed;
  }

  [[nodiscard]] const std::string& source() const { return config_.source; }

 private:
  const KeyValueConfig& config_;
};

Mat parse_state_weight(const ConfigReader& reader, int n) {
  const auto* value = reader.find("model.H");
  if (!value) {
    return Mat::Identity(n, n);
  }
  const Vec entries = reader.get_vec("model.H");
  if (entries.size() == 1) {
    return entries(0) * Mat::Identity(n, n);
  }
  if (entries.size() == n) {
    return entries.asDiagonal();
  }
  if (entries.size() == static_cast<Eigen::Index>(n) * n) {
    Mat h(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        h(i, j) = entries(i * n + j);
      }
    }
    return h;
  }
  reader.fail("model.H", *value,
              "1 entry (scaled identity), n (diagonal), or n*n (row-major matrix)");
}

}  // namespace

KeyValueConfig parse_config_text(const std::string& text, const std::string& source) {
  KeyValueConfig config;
  config.source = source;
  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_number) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(source + ":" + std::to_string(line_number) +
                        ": missing key before '='");
    }
    if (!config.values.emplace(key, value).second) {
      throw ConfigError(source + ":" + std::to_string(line_number) + ": duplicate key '" +
                        key + "'");
    }
  }
  return config;
}

KeyValueConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

BuiltScenario build_scenario(const KeyValueConfig& config, const CliOverrides& overrides) {
  for (const auto& [key, value] : config.values) {
    (void)value;
    if (std::find_if(kKnownKeys.begin(), kKnownKeys.end(),
                     [&](const char* known) { return key == known; }) == kKnownKeys.end()) {
      throw ConfigError(config.source + ": unknown key '" + key + "'");
    }
  }
  const ConfigReader reader(config);

  try {
    const std::string model_kind = reader.get_string("model.kind", "nonlinear-spring");
    if (model_kind != "nonlinear-spring") {
      throw ConfigError(config.source + ": model.kind '" + model_kind +
                        "' is not supported (only 'nonlinear-spring')");
    }

    Vec gain(2);
    gain << -20.0, -20.0;
    if (reader.has("model.K")) {
      gain = reader.get_vec("model.K");
    }

    systems::SystemModel model = systems::nonlinear_spring_model(gain);
    const int n = model.n;

    Mat weight = parse_state_weight(reader, n);
    Mat closed_loop = systems::spring_closed_loop_matrix(gain);
    Mat input_matrix = Mat::Zero(n, model.m);
    input_matrix(n - 1, 0) = 1.0;

    BuiltScenario built{sim::Scenario{},
                        core::QuadraticLyapunov::from_closed_loop(closed_loop, weight,
                                                                  input_matrix),
                        std::move(closed_loop),
                        std::move(weight),
                        std::move(input_matrix)};
    built.scenario.model = std::move(model);
    built.scenario.certificate = built.quadratic;

    const std::string reference_kind = reader.get_string("reference.kind", "");
    if (!reader.has("reference.kind")) {
      reader.fail_missing("reference.kind");
    }
    if (reference_kind == "smooth-sine" || reference_kind == "case1") {
      built.scenario.reference = systems::smooth_sine_reference();
    } else if (reference_kind == "quantized-sine" || reference_kind == "case2") {
      built.scenario.reference = systems::quantized_sine_reference();
    } else {
      throw ConfigError(config.source + ": reference.kind '" + reference_kind +
                        "' is not one of smooth-sine|case1|quantized-sine|case2");
    }
    auto& reference = built.scenario.reference;
    reference.d = reader.get_double("reference.d", reference.d);
    const double d1_default = reference.d_first.value_or(reference.d);
    const double d1 = reader.get_double("reference.d1", d1_default);

    built.scenario.lipschitz =
        systems::spring_lipschitz_provider(gain, d1, built.quadratic);

    built.scenario.trigger.sigma = reader.get_double("trigger.sigma", 0.95);
    const bool has_r = reader.has("trigger.r");
    const bool has_target = reader.has("trigger.target_r1");
    if (has_r == has_target) {
      throw ConfigError(config.source +
                        ": exactly one of trigger.r and trigger.target_r1 is required");
    }
    if (has_r) {
      built.scenario.trigger.r = reader.get_double("trigger.r", 0.0);
    } else {
      const double target = reader.get_double("trigger.target_r1", 0.0);
      built.scenario.trigger.r = core::invert_ultimate_bound(
          target, built.quadratic.alpha1, built.quadratic.alpha2);
    }
    trigger::validate(built.scenario.trigger);

    built.scenario.x0 = reader.get_vec("plant.x0");
    if (built.scenario.x0.size() != n) {
      throw ConfigError(config.source + ": plant.x0 needs exactly " + std::to_string(n) +
                        " entries, got " + std::to_string(built.scenario.x0.size()));
    }

    built.scenario.sim.dt = reader.get_double("sim.dt", built.scenario.sim.dt);
    built.scenario.sim.horizon =
        reader.get_double("sim.horizon", built.scenario.sim.horizon);
    built.scenario.sim.zeno_max_events = static_cast<int>(
        reader.get_long("sim.zeno_guard", built.scenario.sim.zeno_max_events));
    built.scenario.sim.zeno_window =
        reader.get_double("sim.zeno_window", built.scenario.sim.zeno_window);
    built.scenario.sim.invariant_checks =
        reader.get_bool("sim.checks", built.scenario.sim.invariant_checks);

    const std::string ledger_mode =
        overrides.ledger_mode.value_or(reader.get_string("ledger.mode", "tightening"));
    if (ledger_mode == "tightening") {
      built.scenario.freeze_ledger = false;
    } else if (ledger_mode == "frozen") {
      built.scenario.freeze_ledger = true;
    } else {
      throw ConfigError(config.source + ": ledger.mode '" + ledger_mode +
                        "' is not one of tightening|frozen");
    }

    const long samples = reader.get_long("bounds.samples", built.bound_samples);
    if (samples <= 0) {
      throw ConfigError(config.source + ": bounds.samples must be positive");
    }
    built.bound_samples = static_cast<int>(samples);
    built.bound_seed = reader.get_u64("bounds.seed", built.bound_seed);

    const bool has_p1 = reader.has("bounds.P1");
    const bool has_p2 = reader.has("bounds.P2");
    const bool has_p3 = reader.has("bounds.P3");
    if (has_p1 != has_p2 || has_p2 != has_p3) {
      throw ConfigError(config.source +
                        ": bounds.P1, bounds.P2, bounds.P3 must be given together");
    }
    if (has_p1) {
      systems::LipschitzConstants forced;
      forced.P1 = reader.get_double("bounds.P1", 0.0);
      forced.P2 = reader.get_double("bounds.P2", 0.0);
      forced.P3 = reader.get_double("bounds.P3", 0.0);
      built.growth_overrides = forced;
    }

    built.scenario.name = reader.get_string("scenario.name", built.scenario.name);

    if (overrides.dt) {
      built.scenario.sim.dt = *overrides.dt;
    }
    if (overrides.horizon) {
      built.scenario.sim.horizon = *overrides.horizon;
    }
    if (overrides.invariant_checks) {
      built.scenario.sim.invariant_checks = *overrides.invariant_checks;
    }
    sim::validate(built.scenario.sim);
    return built;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(config.source + ": " + e.what());
  }
}

}  // namespace ettrack::cli

#pragma once

#include <string>

#include "ettrack/core/lyapunov.hpp"
#include "ettrack/systems/reference_signal.hpp"
#include "ettrack/systems/system_model.hpp"
#include "ettrack/trigger/trigger.hpp"
#include "ettrack/types.hpp"

namespace ettrack::sim {

struct SimConfig {
  double dt = 1e-4;
  double horizon = 10.0;
  // Abort when more than zeno_max_events fire inside any zeno_window span.
  int zeno_max_events = 50;
  double zeno_window = 0.01;
  bool invariant_checks = true;
};

void validate(const SimConfig& config);

// Everything one run needs. Scenarios are plain values: copy one, tweak a
// field, run again — runs are bit-for-bit deterministic for equal scenarios.
struct Scenario {
  systems::SystemModel model;
  core::LyapunovCertificate certificate;
  systems::LipschitzVectorProvider lipschitz;
  systems::ReferenceSignal reference;
  trigger::TriggerParams trigger;
  Vec x0;
  SimConfig sim;
  // Keep the ledger at its arming value for the whole run (ablation mode).
  bool freeze_ledger = false;
  std::string name = "scenario";
};

}  // namespace ettrack::sim

#pragma once

#include <cstdint>
#include <vector>

#include "ettrack/types.hpp"

namespace ettrack::sim {

// Dense per-step history, one row per solver boundary (preallocated, so a
// run makes no per-step allocations for logging). Rows are recorded after
// trigger processing: at an event instant the held measurement has just been
// re-sampled, so e is exactly zero there and g sits below its threshold.
// u is the control applied over [t_k, t_k + dt) (zero before arming).
struct TrajectoryLog {
  Vec t;
  Mat x;        // rows: steps, cols: n
  Mat x_d;      // n
  Mat v;        // q
  Mat x_tilde;  // n
  Mat u;        // m
  Mat e;        // 2n + q

  Vec V;
  Vec g;
  Vec norm_xt;
  std::vector<std::uint8_t> armed;

  [[nodiscard]] Eigen::Index rows() const { return t.size(); }
};

enum class EventReason {
  FirstArming,        // ||x_tilde|| reached r for the first time
  ThresholdCrossing,  // g >= 0 with ||x_tilde|| >= r
};

[[nodiscard]] const char* to_string(EventReason reason);

struct EventRecord {
  int index = 0;
  double t = 0.0;
  double norm_xt = 0.0;
  Vec L;  // ledger value after this event
  EventReason reason = EventReason::ThresholdCrossing;
};

using EventLog = std::vector<EventRecord>;

// Aggregates computed from the logs after a run. Convention: the arming
// event at t0 counts as a control update (arming_counts_as_update records
// that). A quantity that does not exist for the run (fewer than two events,
// error never entered the r-ball) is NaN.
struct Metrics {
  int total_updates = 0;
  double min_inter_exec = 0.0;
  double avg_freq_total = 0.0;
  double avg_freq_transient = 0.0;
  double first_entry_time = 0.0;        // first t with ||x_tilde|| <= r
  double ultimate_bound_observed = 0.0; // max ||x_tilde|| over final 20%
  double norm_xt_at_arming = 0.0;
  bool settled = false;  // entered the r-ball and final-20% max <= r1
  bool arming_counts_as_update = true;
  double r = 0.0;
  double r1 = 0.0;
  double horizon = 0.0;
  double dt = 0.0;
};

}  // namespace ettrack::sim

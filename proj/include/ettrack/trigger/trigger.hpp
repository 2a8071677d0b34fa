#pragma once

#include <functional>
#include <optional>

#include "ettrack/core/lyapunov.hpp"
#include "ettrack/systems/system_model.hpp"
#include "ettrack/types.hpp"

namespace ettrack::trigger {

// sigma in (0, 1) splits the certificate decay between guaranteed decrease
// and measurement-error slack; r > 0 is the radius below which the trigger
// stays quiet and the hold is simply kept.
struct TriggerParams {
  double sigma = 0.95;
  double r = 0.0;
};

void validate(const TriggerParams& params);

// Sample-and-hold bookkeeping. Before the error norm first reaches r the
// trigger is unarmed and the applied control is zero; arming fires the first
// event, seeds the Lipschitz ledger, and starts the hold.
struct TriggerState {
  bool armed = false;
  int event_index = -1;
  Vec held_xi;
  Vec held_u;
  Vec L_current;

  [[nodiscard]] static TriggerState unarmed(int xi_dim, int input_dim);
};

// e = held_xi - xi_now (the held stacked measurement minus the current one).
[[nodiscard]] Vec measurement_error(const Vec& held_xi, const Vec& xi_now);

// sigma * alpha3(s) / beta(s) for s = ||x_tilde|| > 0. Throws
// ThresholdUndefinedError if beta vanishes there (cannot happen for valid
// certificates on s >= r > 0).
[[nodiscard]] double trigger_threshold(double norm_x_tilde, double sigma,
                                       const core::LyapunovCertificate& cert);

// g = L^T |e| - sigma * alpha3(||x_tilde||) / beta(||x_tilde||).
// An event is due when g >= 0 and ||x_tilde|| >= r.
[[nodiscard]] double trigger_function(const Vec& e, const Vec& x_tilde, const Vec& L,
                                      const TriggerParams& params,
                                      const core::LyapunovCertificate& cert);

// Ledger rule: candidate = provider.L(||x_tilde|| at the event); the new
// entry is the componentwise minimum of the candidate and the previous
// ledger value, so the ledger never increases along a run.
[[nodiscard]] Vec update_lipschitz_ledger(const std::optional<Vec>& prev_L,
                                          double norm_xt_at_event,
                                          const systems::LipschitzVectorProvider& provider);

// Fires an event at the current stacked state: re-samples the hold, applies
// gamma to it, and advances the ledger (unless frozen, in which case the
// ledger entry seeded at arming is kept). Returns the state unchanged if
// ||x_tilde|| < r — events below the quiet radius are rejected.
[[nodiscard]] TriggerState fire_event(const TriggerState& state, const Vec& xi_now,
                                      int n, const std::function<Vec(const Vec&)>& gamma,
                                      const systems::LipschitzVectorProvider& provider,
                                      const TriggerParams& params,
                                      bool update_ledger = true);

}  // namespace ettrack::trigger

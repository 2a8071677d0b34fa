#pragma once

#include "ettrack/sim/logs.hpp"
#include "ettrack/sim/scenario.hpp"

namespace ettrack::sim {

struct RunResult {
  TrajectoryLog trajectory;
  EventLog events;
  Metrics metrics;
};

// One classical fixed-step RK4 advance of the stacked closed-loop state with
// the control held constant across the step. y = [x; x_d] for references
// whose v is a function of time (evaluated pointwise at stage times, never
// integrated), or [x; x_d; v] when v is ODE-driven.
[[nodiscard]] Vec step(const systems::SystemModel& model,
                       const systems::ReferenceSignal& reference, const Vec& y,
                       double t, const Vec& u_held, double dt);

// Runs the scenario over its horizon on the fixed dt grid. The trigger is
// evaluated at step boundaries only; an event fired at a boundary takes
// effect for the step that follows it. Before the error norm first reaches
// r the applied control is zero. Throws ZenoSuspectedError,
// NumericalBlowupError, or InvariantViolationError (the latter only when
// invariant checks are enabled).
[[nodiscard]] RunResult run(const Scenario& scenario);

// Tolerances of the per-step certificate checks. sigma_check defaults to
// the trigger's sigma; lowering it demands a faster decrease than the
// certificate guarantees, which is how the checks are negative-controlled.
struct InvariantCheckParams {
  double sigma_check = 0.95;
  double tol_abs = 1e-6;
  double tol_rel = 0.05;
  double sublevel_slack = 1e-3;
};

// Single-step decrease check: with the trigger enforced and the error norm
// at or above r over the previous step,
//   V_next - V_prev <= -(1 - sigma_check) * alpha3(norm_prev) * dt + tol
// with tol = tol_abs + tol_rel * |V_next - V_prev|.
[[nodiscard]] bool decrease_step_ok(double V_prev, double V_next, double norm_xt_prev,
                                    double dt, const InvariantCheckParams& params,
                                    const core::LyapunovCertificate& cert);

// Streaming monitor applied at every logged record while checks are on:
//  (a) the decrease check above, between consecutive armed records;
//  (b) once V dips below alpha2(r) while armed, it must stay below
//      alpha2(r) * (1 + sublevel_slack);
//  (c) the reference stack must honor its declared bound d.
class InvariantMonitor {
 public:
  InvariantMonitor(const core::LyapunovCertificate* cert, double sigma, double r,
                   double dt, double reference_bound_d,
                   InvariantCheckParams params = {});

  // Throws InvariantViolationError with a t-stamped diagnostic.
  void observe(double t, double V, double norm_xt, bool armed,
               double ref_stack_norm);

 private:
  const core::LyapunovCertificate* cert_;
  InvariantCheckParams params_;
  double r_;
  double dt_;
  double alpha2_r_;
  double d_bound_;
  bool have_prev_ = false;
  bool latched_ = false;
  double prev_V_ = 0.0;
  double prev_norm_ = 0.0;
  bool prev_armed_ = false;
};

}  // namespace ettrack::sim

#include "ettrack/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>

namespace ettrack::sim {

namespace {
constexpr double kBlowupLimit = 1e12;
}

void validate(const SimConfig& config) {
  if (!std::isfinite(config.dt) || !(config.dt > 0.0)) {
    throw DomainError("integrator step dt must be finite and positive");
  }
  if (!std::isfinite(config.horizon) || !(config.horizon >= config.dt)) {
    throw DomainError("horizon must be finite and at least one step long");
  }
  if (config.zeno_max_events < 1) {
    throw DomainError("the Zeno guard needs a positive event budget");
  }
  if (!std::isfinite(config.zeno_window) || !(config.zeno_window > 0.0)) {
    throw DomainError("the Zeno guard window must be finite and positive");
  }
}

const char* to_string(EventReason reason) {
  switch (reason) {
    case EventReason::FirstArming:
      return "first-arming";
    case EventReason::ThresholdCrossing:
      return "threshold-crossing";
  }
  return "unknown";
}

Vec step(const systems::SystemModel& model, const systems::ReferenceSignal& reference,
         const Vec& y, double t, const Vec& u_held, double dt) {
  const int n = model.n;
  const int q = model.q;
  const bool ode_driven = reference.kind == systems::ReferenceKind::OdeDriven;
  const Eigen::Index stack_dim = ode_driven ? 2 * n + q : 2 * n;
  require_size("integrator stack", y, stack_dim);
  require_size("held input", u_held, model.m);
  if (!std::isfinite(dt) || !(dt > 0.0)) {
    throw DomainError("integrator step dt must be finite and positive");
  }

  auto field = [&](double stage_t, const Vec& stage_y) {
    Vec dy(stack_dim);
    const Vec x = stage_y.head(n);
    const Vec x_d = stage_y.segment(n, n);
    dy.head(n) = model.f(x, u_held);
    if (ode_driven) {
      const Vec v = stage_y.tail(q);
      dy.segment(n, n) = model.f_r(x_d, v);
      dy.tail(q) = reference.v_dot(stage_t, v);
    } else {
      dy.segment(n, n) = model.f_r(x_d, reference.v_at(stage_t));
    }
    return dy;
  };

  const double half = 0.5 * dt;
  const Vec k1 = field(t, y);
  const Vec k2 = field(t + half, y + half * k1);
  const Vec k3 = field(t + half, y + half * k2);
  const Vec k4 = field(t + dt, y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool decrease_step_ok(double V_prev, double V_next, double norm_xt_prev, double dt,
                      const InvariantCheckParams& params,
                      const core::LyapunovCertificate& cert) {
  const double delta_v = V_next - V_prev;
  const double budget = -(1.0 - params.sigma_check) * cert.alpha3(norm_xt_prev) * dt +
                        params.tol_abs + params.tol_rel * std::abs(delta_v);
  return delta_v <= budget;
}

InvariantMonitor::InvariantMonitor(const core::LyapunovCertificate* cert, double sigma,
                                   double r, double dt, double reference_bound_d,
                                   InvariantCheckParams params)
    : cert_(cert),
      params_(params),
      r_(r),
      dt_(dt),
      alpha2_r_(cert->alpha2(r)),
      d_bound_(reference_bound_d) {
  params_.sigma_check = sigma;
}

void InvariantMonitor::observe(double t, double V, double norm_xt, bool armed,
                               double ref_stack_norm) {
  if (ref_stack_norm > d_bound_ * (1.0 + 1e-9) + 1e-12) {
    std::ostringstream message;
    message << "t=" << t << ": reference stack norm " << ref_stack_norm
            << " exceeds its declared bound " << d_bound_;
    throw InvariantViolationError(message.str());
  }
  if (have_prev_ && prev_armed_ && prev_norm_ >= r_) {
    if (!decrease_step_ok(prev_V_, V, prev_norm_, dt_, params_, *cert_)) {
      std::ostringstream message;
      message << "t=" << t << ": certificate decrease check failed: V went from "
              << prev_V_ << " to " << V << " with ||x_tilde|| = " << prev_norm_;
      throw InvariantViolationError(message.str());
    }
  }
  if (!latched_ && armed && V <= alpha2_r_) {
    latched_ = true;
  } else if (latched_ && V > alpha2_r_ * (1.0 + params_.sublevel_slack)) {
    std::ostringstream message;
    message << "t=" << t << ": certificate value " << V
            << " left the captured sublevel set alpha2(r) = " << alpha2_r_;
    throw InvariantViolationError(message.str());
  }
  have_prev_ = true;
  prev_V_ = V;
  prev_norm_ = norm_xt;
  prev_armed_ = armed;
}

RunResult run(const Scenario& scenario) {
  validate(scenario.sim);
  trigger::validate(scenario.trigger);

  const auto& model = scenario.model;
  const auto& reference = scenario.reference;
  const int n = model.n;
  const int m = model.m;
  const int q = model.q;
  const int xi_dim = model.xi_dim();
  if (scenario.lipschitz.xi_dim != xi_dim || scenario.lipschitz.state_block != 2 * n) {
    throw DimensionMismatchError("sensitivity provider does not match the model stack");
  }
  require_size("initial plant state", scenario.x0, n);
  require_size("initial reference state", reference.x_d0, n);
  if (reference.q != q) {
    throw DimensionMismatchError("reference exogenous dimension does not match the model");
  }
  const bool ode_driven = reference.kind == systems::ReferenceKind::OdeDriven;
  if (ode_driven) {
    require_size("initial exogenous input", reference.v0, q);
    if (!reference.v_dot) {
      throw DomainError("an ODE-driven reference needs v_dot");
    }
  } else if (!reference.v_at) {
    throw DomainError("a time-function reference needs v_at");
  }

  const double dt = scenario.sim.dt;
  const auto steps = static_cast<Eigen::Index>(std::llround(scenario.sim.horizon / dt));
  const Eigen::Index rows = steps + 1;

  TrajectoryLog log;
  log.t.resize(rows);
  log.x.resize(rows, n);
  log.x_d.resize(rows, n);
  log.v.resize(rows, q);
  log.x_tilde.resize(rows, n);
  log.u.resize(rows, m);
  log.e.resize(rows, xi_dim);
  log.V.resize(rows);
  log.g.resize(rows);
  log.norm_xt.resize(rows);
  log.armed.assign(static_cast<std::size_t>(rows), 0);

  EventLog events;
  auto state = trigger::TriggerState::unarmed(xi_dim, m);
  std::deque<double> recent_events;

  std::optional<InvariantMonitor> monitor;
  if (scenario.sim.invariant_checks) {
    monitor.emplace(&scenario.certificate, scenario.trigger.sigma, scenario.trigger.r,
                    dt, reference.d);
  }

  Vec y(ode_driven ? 2 * n + q : 2 * n);
  y.head(n) = scenario.x0;
  y.segment(n, n) = reference.x_d0;
  if (ode_driven) {
    y.tail(q) = reference.v0;
  }

  const Vec zero_u = Vec::Zero(m);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Vec x = y.head(n);
    const Vec x_d = y.segment(n, n);
    const Vec v = ode_driven ? Vec(y.tail(q)) : reference.v_at(t);
    const Vec x_tilde = x - x_d;
    const double norm_xt = x_tilde.norm();
    const Vec xi = systems::assemble_xi(x_tilde, x_d, v);

    bool fired = false;
    EventReason reason = EventReason::ThresholdCrossing;
    Vec e_row = Vec::Zero(xi_dim);
    double g_row = 0.0;
    if (!state.armed) {
      if (norm_xt >= scenario.trigger.r) {
        state = trigger::fire_event(state, xi, n, model.gamma, scenario.lipschitz,
                                    scenario.trigger, true);
        fired = true;
        reason = EventReason::FirstArming;
      }
      g_row = -trigger::trigger_threshold(norm_xt, scenario.trigger.sigma,
                                          scenario.certificate);
    } else {
      e_row = trigger::measurement_error(state.held_xi, xi);
      g_row = trigger::trigger_function(e_row, x_tilde, state.L_current,
                                        scenario.trigger, scenario.certificate);
      if (g_row >= 0.0 && norm_xt >= scenario.trigger.r) {
        state = trigger::fire_event(state, xi, n, model.gamma, scenario.lipschitz,
                                    scenario.trigger, !scenario.freeze_ledger);
        fired = true;
        e_row.setZero();
        g_row = -trigger::trigger_threshold(norm_xt, scenario.trigger.sigma,
                                            scenario.certificate);
      }
    }

    if (fired) {
      events.push_back({state.event_index, t, norm_xt, state.L_current, reason});
      recent_events.push_back(t);
      while (!recent_events.empty() &&
             recent_events.front() <= t - scenario.sim.zeno_window) {
        recent_events.pop_front();
      }
      if (static_cast<int>(recent_events.size()) > scenario.sim.zeno_max_events) {
        std::ostringstream message;
        message << "t=" << t << ": " << recent_events.size() << " events inside one "
                << scenario.sim.zeno_window
                << "s window exceed the Zeno guard budget of "
                << scenario.sim.zeno_max_events;
        throw ZenoSuspectedError(message.str());
      }
    }

    const double V = scenario.certificate.value(x_tilde);
    const Vec& u_applied = state.armed ? state.held_u : zero_u;

    log.t(k) = t;
    log.x.row(k) = x.transpose();
    log.x_d.row(k) = x_d.transpose();
    log.v.row(k) = v.transpose();
    log.x_tilde.row(k) = x_tilde.transpose();
    log.u.row(k) = u_applied.transpose();
    log.e.row(k) = e_row.transpose();
    log.V(k) = V;
    log.g(k) = g_row;
    log.norm_xt(k) = norm_xt;
    log.armed[static_cast<std::size_t>(k)] = state.armed ? 1 : 0;

    if (monitor) {
      monitor->observe(t, V, norm_xt, state.armed,
                       std::sqrt(x_d.squaredNorm() + v.squaredNorm()));
    }

    if (k < steps) {
      y = step(model, reference, y, t, u_applied, dt);
      if (!all_finite(y) || y.cwiseAbs().maxCoeff() > kBlowupLimit) {
        std::ostringstream message;
        message << "t=" << t + dt << ": a state component left the trusted range (|y| > "
                << kBlowupLimit << " or non-finite)";
        throw NumericalBlowupError(message.str());
      }
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  Metrics metrics;
  metrics.total_updates = static_cast<int>(events.size());
  metrics.r = scenario.trigger.r;
  metrics.r1 = core::ultimate_bound(scenario.trigger.r, scenario.certificate.alpha1,
                                    scenario.certificate.alpha2);
  metrics.horizon = scenario.sim.horizon;
  metrics.dt = dt;
  metrics.arming_counts_as_update = true;

  metrics.min_inter_exec = nan;
  if (events.size() >= 2) {
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < events.size(); ++i) {
      min_gap = std::min(min_gap, events[i].t - events[i - 1].t);
    }
    metrics.min_inter_exec = min_gap;
  }
  metrics.avg_freq_total = static_cast<double>(events.size()) / scenario.sim.horizon;
  metrics.norm_xt_at_arming = events.empty() ? nan : events.front().norm_xt;

  metrics.first_entry_time = nan;
  for (Eigen::Index k = 0; k < rows; ++k) {
    if (log.norm_xt(k) <= scenario.trigger.r) {
      metrics.first_entry_time = log.t(k);
      break;
    }
  }
  metrics.avg_freq_transient = nan;
  if (std::isfinite(metrics.first_entry_time) && metrics.first_entry_time > 0.0) {
    std::size_t before = 0;
    for (const auto& event : events) {
      if (event.t < metrics.first_entry_time) {
        ++before;
      }
    }
    metrics.avg_freq_transient =
        static_cast<double>(before) / metrics.first_entry_time;
  }

  const Eigen::Index tail_start = steps - steps / 5;
  double tail_max = 0.0;
  for (Eigen::Index k = tail_start; k < rows; ++k) {
    tail_max = std::max(tail_max, log.norm_xt(k));
  }
  metrics.ultimate_bound_observed = tail_max;
  metrics.settled = std::isfinite(metrics.first_entry_time) && tail_max <= metrics.r1;

  return RunResult{std::move(log), std::move(events), metrics};
}

}  // namespace ettrack::sim

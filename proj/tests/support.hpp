#pragma once

// Shared fixtures: the benchmark spring scenarios built directly against the
// library API, plus cached full-horizon runs so multiple test cases can scan
// the same logs without re-simulating.

#include <cmath>

#include "ettrack/core/lyapunov.hpp"
#include "ettrack/sim/scenario.hpp"
#include "ettrack/sim/simulator.hpp"
#include "ettrack/systems/reference_signal.hpp"
#include "ettrack/systems/spring.hpp"

namespace testsupport {

// Benchmark constants: spring plant under u = K x_tilde + feedforward,
// K = [-20, -20], certificate from P A + A^T P = -I with B = [0; 1].
inline ettrack::Vec benchmark_gain() {
  ettrack::Vec k(2);
  k << -20.0, -20.0;
  return k;
}

inline const ettrack::core::QuadraticLyapunov& benchmark_certificate() {
  static const ettrack::core::QuadraticLyapunov cert = [] {
    const ettrack::Mat a = ettrack::systems::spring_closed_loop_matrix(benchmark_gain());
    ettrack::Mat b(2, 1);
    b << 0.0, 1.0;
    return ettrack::core::QuadraticLyapunov::from_closed_loop(
        a, ettrack::Mat::Identity(2, 2), b);
  }();
  return cert;
}

constexpr double kSigma = 0.95;
constexpr double kTriggerRadius = 0.0154;
constexpr double kStateAmplitudeBound = 2.5;  // |x_d1| <= d1 over the benchmark references

inline ettrack::Vec benchmark_x0() {
  ettrack::Vec x0(2);
  x0 << 5.0, -1.0;
  return x0;
}

inline ettrack::sim::Scenario benchmark_scenario(const ettrack::systems::ReferenceSignal& ref,
                                                 double dt, double horizon) {
  ettrack::sim::Scenario sc;
  sc.model = ettrack::systems::nonlinear_spring_model(benchmark_gain());
  sc.certificate = benchmark_certificate();
  sc.lipschitz = ettrack::systems::spring_lipschitz_provider(
      benchmark_gain(), kStateAmplitudeBound, benchmark_certificate());
  sc.reference = ref;
  sc.trigger.sigma = kSigma;
  sc.trigger.r = kTriggerRadius;
  sc.x0 = benchmark_x0();
  sc.sim.dt = dt;
  sc.sim.horizon = horizon;
  return sc;
}

inline ettrack::sim::Scenario case1_scenario(double dt = 1e-4, double horizon = 10.0) {
  auto sc = benchmark_scenario(ettrack::systems::smooth_sine_reference(), dt, horizon);
  sc.name = "case1";
  return sc;
}

inline ettrack::sim::Scenario case2_scenario(double dt = 1e-4, double horizon = 10.0) {
  auto sc = benchmark_scenario(ettrack::systems::quantized_sine_reference(), dt, horizon);
  sc.name = "case2";
  return sc;
}

// Full-horizon runs are expensive (1e5 steps); cache one of each.
inline const ettrack::sim::RunResult& case1_run() {
  static const ettrack::sim::RunResult result = ettrack::sim::run(case1_scenario());
  return result;
}

inline const ettrack::sim::RunResult& case2_run() {
  static const ettrack::sim::RunResult result = ettrack::sim::run(case2_scenario());
  return result;
}

inline const ettrack::sim::RunResult& case1_frozen_run() {
  static const ettrack::sim::RunResult result = [] {
    auto sc = case1_scenario();
    sc.freeze_ledger = true;
    sc.name = "case1-frozen";
    // A frozen conservative vector fires near every step by design, which is
    // precisely what this comparison run is meant to expose -- lift the
    // burst safeguard so the run can finish.
    sc.sim.zeno_max_events = 1000000;
    return ettrack::sim::run(sc);
  }();
  return result;
}

}  // namespace testsupport

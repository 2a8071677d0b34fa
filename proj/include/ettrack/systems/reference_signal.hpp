#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ettrack/types.hpp"

namespace ettrack::systems {

// How the exogenous input v of the reference generator is produced.
enum class ReferenceKind {
  OdeDriven,  // v integrated alongside the state from v_dot(t, v)
  Analytic,   // v = v_at(t), smooth
  Quantized,  // v = v_at(t), piecewise constant
};

// Metadata for piecewise-constant inputs: between jumps v moves at rate at
// most c, jumps are at most J_v in norm and at least T_v apart.
struct DwellTimeMetadata {
  double c = 0.0;
  double T_v = 0.0;
  double J_v = 0.0;
};

// Reference trajectory generator plus the declared bounds the analysis layer
// consumes. `d` is the uniform bound on ||[x_d; v]|| over the horizon of
// interest; the optional fields carry the assumptions that hold for this
// particular input class (rate bound for smooth inputs, dwell-time metadata
// for quantized ones, a uniform bound on ||v|| alone, and a bound on the
// first reference coordinate used by model-specific Lipschitz envelopes).
struct ReferenceSignal {
  ReferenceKind kind = ReferenceKind::Analytic;
  int q = 0;
  Vec x_d0;
  Vec v0;
  std::function<Vec(double t, const Vec& v)> v_dot;  // OdeDriven only
  std::function<Vec(double t)> v_at;                 // Analytic | Quantized
  double d = 0.0;
  std::optional<double> rate_bound_c;
  std::optional<DwellTimeMetadata> dwell;
  std::optional<double> d_v;
  std::optional<double> d_first;
  std::string name = "reference";
};

// Double integrator driven by v_dot = -cos t from v(0) = 0, so v(t) = -sin t
// and x_d(t) = [pi/3 + sin t; cos t]. Declared region bound d = 2.5 with
// first-coordinate bound 2.5 and rate bound c = 1. Config token: "case1".
[[nodiscard]] ReferenceSignal smooth_sine_reference();

// Same double integrator, but v is -sin t snapped to the 0.1 grid: a
// piecewise constant input with jump size 0.1 and minimum dwell
// 2*asin(0.05) between jumps. Starts at x_d(0) = [1; 1.003], v(0) = 0.
// Config token: "case2".
[[nodiscard]] ReferenceSignal quantized_sine_reference();

// Snaps w to the nearest multiple of `step`. At exact midpoints the carrier
// slope decides: rising picks the higher neighbor, falling the lower; a
// zero-slope midpoint (unreachable for the sine carrier) resolves to the
// even multiple for determinism.
[[nodiscard]] double quantize_to_grid(double w, double slope, double step);

// Minimum spacing between jumps of the 0.1-grid quantizer applied to -sin t:
// the two jumps flanking each zero crossing are 2*asin(0.05) apart, closer
// than any other consecutive pair.
[[nodiscard]] double quantized_sine_min_dwell();

}  // namespace ettrack::systems

#include "ettrack/systems/reference_signal.hpp"

#include <cmath>

namespace ettrack::systems {

ReferenceSignal smooth_sine_reference() {
  ReferenceSignal ref;
  ref.kind = ReferenceKind::OdeDriven;
  ref.q = 1;
  ref.x_d0 = Vec(2);
  ref.x_d0 << M_PI / 3.0, 1.0;
  ref.v0 = Vec::Zero(1);
  ref.v_dot = [](double t, const Vec&) {
    Vec dv(1);
    dv << -std::cos(t);
    return dv;
  };
  ref.d = 2.5;
  ref.rate_bound_c = 1.0;
  ref.d_v = 1.0;
  ref.d_first = 2.5;
  ref.name = "case1";
  return ref;
}

ReferenceSignal quantized_sine_reference() {
  ReferenceSignal ref;
  ref.kind = ReferenceKind::Quantized;
  ref.q = 1;
  ref.x_d0 = Vec(2);
  ref.x_d0 << 1.0, 1.003;
  ref.v0 = Vec::Zero(1);
  ref.v_at = [](double t) {
    Vec v(1);
    v << quantize_to_grid(-std::sin(t), -std::cos(t), 0.1);
    return v;
  };
  ref.d = 2.5;
  ref.dwell = DwellTimeMetadata{0.0, quantized_sine_min_dwell(), 0.1};
  ref.d_v = 1.0;
  ref.d_first = 2.5;
  ref.name = "case2";
  return ref;
}

double quantize_to_grid(double w, double slope, double step) {
  if (!std::isfinite(step) || !(step > 0.0)) {
    throw DomainError("grid step must be finite and positive");
  }
  require_finite_scalar("value to quantize", w);
  require_finite_scalar("carrier slope", slope);

  const double scaled = w / step;
  const double lower = std::floor(scaled);
  const double upper = lower + 1.0;
  const double frac = scaled - lower;

  // Exact midpoints land near frac = 0.5 only up to the rounding of w/step
  // (e.g. 0.15 / 0.1 is a few ulp below 1.5), so ties are detected inside a
  // band of 1e-9 grid units.
  double multiple;
  if (std::abs(frac - 0.5) <= 1e-9) {
    if (slope > 0.0) {
      multiple = upper;
    } else if (slope < 0.0) {
      multiple = lower;
    } else {
      multiple = (std::fmod(lower, 2.0) == 0.0) ? lower : upper;
    }
  } else {
    multiple = (frac < 0.5) ? lower : upper;
  }
  return multiple * step;
}

double quantized_sine_min_dwell() { return 2.0 * std::asin(0.05); }

}  // namespace ettrack::systems

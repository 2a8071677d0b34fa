#pragma once

#include "ettrack/core/lyapunov.hpp"
#include "ettrack/types.hpp"

namespace ettrack::core {

// Region descriptor for the stacked state [x_tilde; x_d; v]: tracking errors
// inside the certificate sublevel set {V(w) <= alpha2(R)} paired with
// reference stacks bounded by ||[x_d; v]|| <= d. Both radii must be finite
// and nonnegative.
struct LevelSetSpec {
  double R = 0.0;
  double d = 0.0;
};

void validate(const LevelSetSpec& set);

[[nodiscard]] bool contains_error(const LevelSetSpec& set,
                                  const LyapunovCertificate& cert,
                                  const Vec& x_tilde);

[[nodiscard]] bool contains_reference(const LevelSetSpec& set, const Vec& x_d,
                                      const Vec& v);

[[nodiscard]] bool contains(const LevelSetSpec& set, const LyapunovCertificate& cert,
                            const Vec& x_tilde, const Vec& x_d, const Vec& v);

}  // namespace ettrack::core

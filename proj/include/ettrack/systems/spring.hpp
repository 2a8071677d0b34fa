#pragma once

#include "ettrack/core/lyapunov.hpp"
#include "ettrack/systems/system_model.hpp"

namespace ettrack::systems {

// Unit mass on a cubic hardening spring with unit damping, force actuated:
//
//   x1dot = x2
//   x2dot = -x2 - x1^3 + u
//
// The tracking controller folds in the reference acceleration and cancels
// the cubic term at the (held) measured state:
//
//   gamma(xi) = K x_tilde + v + (x_tilde1 + x_d1)^3 + x_d2
//
// With exact measurements the error dynamics collapse to
// x_tilde_dot = (A + B K) x_tilde; K must make that matrix Hurwitz
// (NonHurwitzError otherwise).
[[nodiscard]] SystemModel nonlinear_spring_model(const Vec& K);

// A + B*K = [[0, 1], [k1, k2 - 1]] for K = [k1, k2].
[[nodiscard]] Mat spring_closed_loop_matrix(const Vec& K);

// Componentwise sensitivity envelope of the spring controller on the region
// with error radius R and first-reference-coordinate bound d1:
//
//   L(R) = [3 (mu + d1)^2 + |k1|,  |k2|,  3 (mu + d1)^2,  1,  1]
//
// where mu = alpha1^{-1}(alpha2(R)) is the worst error norm reachable inside
// the certificate sublevel set. The input-matrix norm is absorbed into the
// certificate's beta (input-projected convention), not into L.
[[nodiscard]] LipschitzVectorProvider spring_lipschitz_provider(
    const Vec& K, double d1, const core::LyapunovCertificate& cert);

}  // namespace ettrack::systems

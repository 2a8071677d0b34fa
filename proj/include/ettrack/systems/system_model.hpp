#pragma once

#include <functional>

#include "ettrack/types.hpp"

namespace ettrack::systems {

// Plant, reference generator, and tracking controller:
//
//   plant      xdot   = f(x, u),        x in R^n, u in R^m
//   reference  xd_dot = f_r(x_d, v),    x_d in R^n, v in R^q
//   controller u      = gamma(xi),      xi = [x - x_d; x_d; v] in R^{2n+q}
//
// The controller sees the stacked state xi; sample-and-hold triggering holds
// a past xi, so the measurement error lives in R^{2n+q} as well.
struct SystemModel {
  int n = 0;
  int m = 0;
  int q = 0;
  std::function<Vec(const Vec& x, const Vec& u)> f;
  std::function<Vec(const Vec& x_d, const Vec& v)> f_r;
  std::function<Vec(const Vec& xi)> gamma;

  [[nodiscard]] int xi_dim() const { return 2 * n + q; }
};

// Validates dimensions by evaluating on zero vectors and checks that the
// origin is an equilibrium of the error dynamics:
// ||f(0, gamma(0)) - f_r(0, 0)|| <= 1e-12. Throws ModelConsistencyError.
[[nodiscard]] SystemModel make_system_model(
    int n, int m, int q, std::function<Vec(const Vec&, const Vec&)> f,
    std::function<Vec(const Vec&, const Vec&)> f_r,
    std::function<Vec(const Vec&)> gamma);

[[nodiscard]] Vec assemble_xi(const Vec& x_tilde, const Vec& x_d, const Vec& v);

struct XiParts {
  Vec x_tilde;
  Vec x_d;
  Vec v;
};
[[nodiscard]] XiParts split_xi(const Vec& xi, int n, int q);

// Componentwise Lipschitz envelope for the closed-loop sensitivity to the
// held-measurement error, as a function of a region radius R: for any two
// stacked states xi, xi + e inside the region implied by R,
//   ||f(x, gamma(xi + e)) - f(x, gamma(xi))|| <= L(R)^T |e|.
// The first `state_block` (= 2n) entries bound the [x_tilde; x_d] part of e,
// the remaining q entries bound the v part. Entries are strictly positive
// and componentwise nondecreasing in R, so the event ledger (which takes
// running minima as the error shrinks) only ever tightens the trigger.
struct LipschitzVectorProvider {
  int xi_dim = 0;
  int state_block = 0;
  std::function<Vec(double R)> L;
};

}  // namespace ettrack::systems

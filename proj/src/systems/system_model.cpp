#include "ettrack/systems/system_model.hpp"

#include <sstream>
#include <utility>

namespace ettrack::systems {

SystemModel make_system_model(int n, int m, int q,
                              std::function<Vec(const Vec&, const Vec&)> f,
                              std::function<Vec(const Vec&, const Vec&)> f_r,
                              std::function<Vec(const Vec&)> gamma) {
  if (n <= 0 || m <= 0 || q <= 0) {
    throw ModelConsistencyError("state, input, and exogenous dimensions must be positive");
  }
  if (!f || !f_r || !gamma) {
    throw ModelConsistencyError("plant, reference, and controller maps must all be set");
  }
  SystemModel model;
  model.n = n;
  model.m = m;
  model.q = q;
  model.f = std::move(f);
  model.f_r = std::move(f_r);
  model.gamma = std::move(gamma);

  const Vec zero_x = Vec::Zero(n);
  const Vec zero_v = Vec::Zero(q);
  const Vec zero_xi = Vec::Zero(model.xi_dim());

  const Vec u0 = model.gamma(zero_xi);
  if (u0.size() != m) {
    std::ostringstream message;
    message << "controller returned " << u0.size() << " components, expected " << m;
    throw ModelConsistencyError(message.str());
  }
  const Vec fx = model.f(zero_x, u0);
  if (fx.size() != n) {
    std::ostringstream message;
    message << "plant field returned " << fx.size() << " components, expected " << n;
    throw ModelConsistencyError(message.str());
  }
  const Vec fr = model.f_r(zero_x, zero_v);
  if (fr.size() != n) {
    std::ostringstream message;
    message << "reference field returned " << fr.size() << " components, expected " << n;
    throw ModelConsistencyError(message.str());
  }
  const double drift = (fx - fr).norm();
  if (!(drift <= 1e-12)) {
    std::ostringstream message;
    message << "origin is not an equilibrium of the error dynamics: "
            << "||f(0, gamma(0)) - f_r(0, 0)|| = " << drift;
    throw ModelConsistencyError(message.str());
  }
  return model;
}

Vec assemble_xi(const Vec& x_tilde, const Vec& x_d, const Vec& v) {
  if (x_tilde.size() != x_d.size()) {
    throw DimensionMismatchError("tracking error and reference state differ in size");
  }
  Vec xi(x_tilde.size() + x_d.size() + v.size());
  xi << x_tilde, x_d, v;
  return xi;
}

XiParts split_xi(const Vec& xi, int n, int q) {
  if (n <= 0 || q <= 0) {
    throw DimensionMismatchError("stack split needs positive dimensions");
  }
  if (xi.size() != 2 * n + q) {
    std::ostringstream message;
    message << "stacked state has " << xi.size() << " components, expected " << 2 * n + q;
    throw DimensionMismatchError(message.str());
  }
  XiParts parts;
  parts.x_tilde = xi.head(n);
  parts.x_d = xi.segment(n, n);
  parts.v = xi.tail(q);
  return parts;
}

}  // namespace ettrack::systems

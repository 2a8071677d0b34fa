#include "ettrack/systems/lipschitz_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ettrack::systems {

namespace {

// Uniform draw from the closed unit ball in `dim` dimensions by rejection.
Vec unit_ball_draw(int dim, std::mt19937_64& rng,
                   std::uniform_real_distribution<double>& unif) {
  Vec x(dim);
  do {
    for (int i = 0; i < dim; ++i) {
      x(i) = unif(rng);
    }
  } while (x.squaredNorm() > 1.0);
  return x;
}

}  // namespace

LipschitzConstants estimate_lipschitz_constants(const SystemModel& model,
                                                const core::LyapunovCertificate& cert,
                                                const core::LevelSetSpec& region,
                                                int samples, std::uint64_t seed) {
  if (!std::isfinite(region.R) || !std::isfinite(region.d)) {
    throw RegionUnboundedError("sampling region radii must be finite");
  }
  core::validate(region);
  if (samples <= 0) {
    throw DomainError("sample count must be positive");
  }

  const int n = model.n;
  const int q = model.q;
  // Worst error norm inside the certificate sublevel set; draws are rejected
  // into {V <= alpha2(R)} from the enclosing ball of this radius.
  const double mu = cert.alpha1.inverse(cert.alpha2(region.R));
  const double cap = cert.alpha2(region.R);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  auto error_field = [&](const Vec& x_tilde, const Vec& x_d, const Vec& v) {
    const Vec xi = assemble_xi(x_tilde, x_d, v);
    return Vec(model.f(x_tilde + x_d, model.gamma(xi)) - model.f_r(x_d, v));
  };

  double max_ratio_error = 0.0;
  double max_ratio_stack = 0.0;
  double max_ratio_reference = 0.0;
  const Vec zero_x = Vec::Zero(n);

  for (int i = 0; i < samples; ++i) {
    Vec x_tilde = Vec::Zero(n);
    if (mu > 0.0) {
      do {
        x_tilde = mu * unit_ball_draw(n, rng, unif);
      } while (cert.value(x_tilde) > cap);
    }
    const Vec stack = region.d * unit_ball_draw(n + q, rng, unif);
    const Vec x_d = stack.head(n);
    const Vec v = stack.tail(q);

    const Vec centre = error_field(zero_x, x_d, v);
    const double norm_xt = x_tilde.norm();
    if (norm_xt > 0.0) {
      max_ratio_error = std::max(
          max_ratio_error, (error_field(x_tilde, x_d, v) - centre).norm() / norm_xt);
    }
    const double norm_stack = stack.norm();
    if (norm_stack > 0.0) {
      max_ratio_stack = std::max(max_ratio_stack, centre.norm() / norm_stack);
    }
    if (region.d > 0.0) {
      max_ratio_reference =
          std::max(max_ratio_reference, model.f_r(x_d, v).norm() / region.d);
    }
  }

  LipschitzConstants out;
  out.P1 = 1.1 * max_ratio_error;
  out.P2 = 1.1 * max_ratio_stack;
  out.P3 = 1.1 * max_ratio_reference;
  out.samples = samples;
  out.seed = seed;
  return out;
}

}  // namespace ettrack::systems

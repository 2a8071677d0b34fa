#include "ettrack/core/level_set.hpp"

#include <cmath>

namespace ettrack::core {

void validate(const LevelSetSpec& set) {
  if (!std::isfinite(set.R) || set.R < 0.0) {
    throw DomainError("region radius R must be finite and nonnegative");
  }
  if (!std::isfinite(set.d) || set.d < 0.0) {
    throw DomainError("reference stack bound d must be finite and nonnegative");
  }
}

bool contains_error(const LevelSetSpec& set, const LyapunovCertificate& cert,
                    const Vec& x_tilde) {
  validate(set);
  require_finite("tracking error", x_tilde);
  return cert.value(x_tilde) <= cert.alpha2(set.R);
}

bool contains_reference(const LevelSetSpec& set, const Vec& x_d, const Vec& v) {
  validate(set);
  require_finite("reference state", x_d);
  require_finite("exogenous input", v);
  return std::sqrt(x_d.squaredNorm() + v.squaredNorm()) <= set.d;
}

bool contains(const LevelSetSpec& set, const LyapunovCertificate& cert,
              const Vec& x_tilde, const Vec& x_d, const Vec& v) {
  return contains_error(set, cert, x_tilde) && contains_reference(set, x_d, v);
}

}  // namespace ettrack::core

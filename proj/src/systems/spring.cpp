#include "ettrack/systems/spring.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace ettrack::systems {

namespace {

void require_spring_gain(const Vec& K) {
  if (K.size() != 2) {
    std::ostringstream message;
    message << "spring feedback gain has " << K.size() << " components, expected 2";
    throw DimensionMismatchError(message.str());
  }
  require_finite("spring feedback gain", K);
}

void require_hurwitz_closed_loop(const Mat& A) {
  const Eigen::EigenSolver<Mat> solver(A);
  const auto eigenvalues = solver.eigenvalues();
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const auto ev = eigenvalues(i);
    if (ev.real() >= 0.0) {
      std::ostringstream message;
      message << "spring closed loop is not Hurwitz: eigenvalue " << ev.real();
      if (ev.imag() != 0.0) {
        message << (ev.imag() > 0.0 ? " + " : " - ") << std::abs(ev.imag()) << "i";
      }
      message << " has nonnegative real part";
      throw NonHurwitzError(message.str());
    }
  }
}

}  // namespace

SystemModel nonlinear_spring_model(const Vec& K) {
  require_spring_gain(K);
  require_hurwitz_closed_loop(spring_closed_loop_matrix(K));
  const double k1 = K(0);
  const double k2 = K(1);

  auto f = [](const Vec& x, const Vec& u) {
    Vec dx(2);
    dx << x(1), -x(1) - x(0) * x(0) * x(0) + u(0);
    return dx;
  };
  auto f_r = [](const Vec& x_d, const Vec& v) {
    Vec dx(2);
    dx << x_d(1), v(0);
    return dx;
  };
  auto gamma = [k1, k2](const Vec& xi) {
    const double x1 = xi(0) + xi(2);
    Vec u(1);
    u << k1 * xi(0) + k2 * xi(1) + xi(4) + x1 * x1 * x1 + xi(3);
    return u;
  };
  return make_system_model(2, 1, 1, f, f_r, gamma);
}

Mat spring_closed_loop_matrix(const Vec& K) {
  require_spring_gain(K);
  Mat a_cl(2, 2);
  a_cl << 0.0, 1.0, K(0), K(1) - 1.0;
  return a_cl;
}

LipschitzVectorProvider spring_lipschitz_provider(const Vec& K, double d1,
                                                  const core::LyapunovCertificate& cert) {
  require_spring_gain(K);
  if (!std::isfinite(d1) || d1 < 0.0) {
    throw DomainError("first-reference-coordinate bound must be finite and nonnegative");
  }
  const double k1 = std::abs(K(0));
  const double k2 = std::abs(K(1));
  const core::ComparisonFunction alpha1 = cert.alpha1;
  const core::ComparisonFunction alpha2 = cert.alpha2;

  LipschitzVectorProvider provider;
  provider.xi_dim = 5;
  provider.state_block = 4;
  provider.L = [k1, k2, d1, alpha1, alpha2](double R) {
    if (!std::isfinite(R) || R < 0.0) {
      throw DomainError("region radius must be finite and nonnegative");
    }
    const double mu = alpha1.inverse(alpha2(R));
    const double cubic = 3.0 * (mu + d1) * (mu + d1);
    Vec envelope(5);
    envelope << cubic + k1, k2, cubic, 1.0, 1.0;
    return envelope;
  };
  return provider;
}

}  // namespace ettrack::systems

#include "ettrack/core/lyapunov.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <string>

namespace ettrack::core {

namespace {

void require_hurwitz(const Mat& A) {
  Eigen::EigenSolver<Mat> solver(A);
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigenvalue computation for the closed-loop matrix failed");
  }
  const auto eigenvalues = solver.eigenvalues();
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const auto ev = eigenvalues(i);
    if (ev.real() >= 0.0) {
      std::ostringstream message;
      message << "closed-loop matrix is not Hurwitz: eigenvalue " << ev.real();
      if (ev.imag() != 0.0) {
        message << (ev.imag() > 0.0 ? " + " : " - ") << std::abs(ev.imag()) << "i";
      }
      message << " has nonnegative real part";
      throw NonHurwitzError(message.str());
    }
  }
}

void require_spd(const Mat& H, const char* what) {
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError(std::string(what) + " must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(H);
  if (solver.info() != Eigen::Success) {
    throw DomainError(std::string("eigenvalue computation for ") + what + " failed");
  }
  if (!(solver.eigenvalues().minCoeff() > 0.0)) {
    throw DomainError(std::string(what) + " must be positive definite");
  }
}

}  // namespace

namespace detail {

Mat solve_lyapunov_equation_impl(const Mat& A, const Mat& H) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) {
    throw DimensionMismatchError("closed-loop matrix must be square");
  }
  if (H.rows() != n || H.cols() != n) {
    throw DimensionMismatchError("decrease matrix must match the closed-loop matrix size");
  }
  if (!all_finite(A)) {
    throw DomainError("closed-loop matrix has a non-finite entry");
  }
  if (!all_finite(H)) {
    throw DomainError("decrease matrix has a non-finite entry");
  }
  require_spd(H, "decrease matrix");
  require_hurwitz(A);

  // (A^T (x) I + I (x) A^T) vec(P) = -vec(H) with column-major vec.
  const Mat At = A.transpose();
  Mat kron = Mat::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      kron.block(i * n, j * n, n, n) = At(i, j) * Mat::Identity(n, n);
    }
    kron.block(i * n, i * n, n, n) += At;
  }
  const Eigen::Map<const Vec> vec_h(H.data(), n * n);
  const Vec vec_p = kron.colPivHouseholderQr().solve(-vec_h);
  Mat P = Eigen::Map<const Mat>(vec_p.data(), n, n);
  P = (0.5 * (P + P.transpose())).eval();

  const double residual = (P * A + At * P + H).norm();
  if (!(residual <= 1e-9 * H.norm())) {
    std::ostringstream message;
    message << "certificate equation residual " << residual
            << " exceeds 1e-9 * ||H||; the closed-loop matrix is too ill-conditioned";
    throw DomainError(message.str());
  }
  return P;
}

}  // namespace detail

QuadraticLyapunov::QuadraticLyapunov(const Mat& P_in, const Mat& H, const Mat& B) {
  const Eigen::Index n = P_in.rows();
  if (P_in.cols() != n) {
    throw DimensionMismatchError("certificate matrix P must be square");
  }
  if (H.rows() != n || H.cols() != n) {
    throw DimensionMismatchError("decrease matrix must match the certificate matrix size");
  }
  if (B.rows() != n || B.cols() < 1) {
    throw DimensionMismatchError("input matrix must have one row per state");
  }
  if (!all_finite(P_in) || !all_finite(H) || !all_finite(B)) {
    throw DomainError("certificate inputs must be finite");
  }

  P = (0.5 * (P_in + P_in.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Mat> p_eigs(P);
  lambda_min_P = p_eigs.eigenvalues().minCoeff();
  lambda_max_P = p_eigs.eigenvalues().maxCoeff();
  if (!(lambda_min_P > 0.0)) {
    throw DomainError("certificate matrix P must be positive definite");
  }
  require_spd(H, "decrease matrix");
  Eigen::SelfAdjointEigenSolver<Mat> h_eigs((0.5 * (H + H.transpose())).eval());
  a = h_eigs.eigenvalues().minCoeff();

  const Mat PB = P * B;
  norm_PB = Eigen::JacobiSVD<Mat>(PB).singularValues()(0);

  const Mat P_held = P;
  const Eigen::Index dim = n;
  value = [P_held, dim](const Vec& w) {
    require_size("certificate argument", w, dim);
    return w.dot(P_held * w);
  };
  gradient = [P_held, dim](const Vec& w) {
    require_size("certificate argument", w, dim);
    return Vec(2.0 * (P_held * w));
  };
  alpha1 = ComparisonFunction::power_law(lambda_min_P, 2.0);
  alpha2 = ComparisonFunction::power_law(lambda_max_P, 2.0);
  alpha3 = ComparisonFunction::power_law(a, 2.0);
  const double beta_slope = 2.0 * norm_PB;
  beta = [beta_slope](double s) { return beta_slope * s; };
}

QuadraticLyapunov QuadraticLyapunov::from_closed_loop(const Mat& A, const Mat& H,
                                                      const Mat& B) {
  return QuadraticLyapunov(detail::solve_lyapunov_equation_impl(A, H), H, B);
}

double QuadraticLyapunov::ultimate_bound_closed_form(double r) const {
  require_finite_scalar("trigger radius", r);
  if (r < 0.0) {
    throw DomainError("trigger radius must be nonnegative");
  }
  return r * std::sqrt(lambda_max_P / lambda_min_P);
}

double ultimate_bound(double r, const ComparisonFunction& alpha1,
                      const ComparisonFunction& alpha2) {
  require_finite_scalar("trigger radius", r);
  if (r < 0.0) {
    throw DomainError("trigger radius must be nonnegative");
  }
  return alpha1.inverse(alpha2(r));
}

double invert_ultimate_bound(double r1, const ComparisonFunction& alpha1,
                             const ComparisonFunction& alpha2) {
  require_finite_scalar("ultimate bound", r1);
  if (r1 < 0.0) {
    throw DomainError("ultimate bound must be nonnegative");
  }
  if (r1 == 0.0) {
    return 0.0;
  }
  auto forward = [&](double r) { return alpha1.inverse(alpha2(r)); };
  double lo = 0.0;
  double hi = r1;
  while (forward(hi) < r1) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) {
      throw DomainError("ultimate bound map never reaches the requested value");
    }
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (forward(mid) < r1) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace ettrack::core

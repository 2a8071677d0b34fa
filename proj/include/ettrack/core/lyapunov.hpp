#pragma once

#include <functional>

#include "ettrack/core/comparison_function.hpp"
#include "ettrack/types.hpp"

namespace ettrack::core {

// Certificate for a tracking-error Lyapunov function V:
//
//   alpha1(||w||) <= value(w) <= alpha2(||w||)
//   d/dt V <= -alpha3(||w||) + beta(||w||) * <Lipschitz vector, |e|>
//
// alpha1..alpha3 are class K-infinity; beta maps a region radius to a
// nonnegative gradient envelope. Two pairing conventions are supported and
// must be kept consistent with the Lipschitz vector used alongside:
//   * full-gradient: beta(R) >= max_{||w||<=R} ||dV/dw||, and the Lipschitz
//     vector includes the input-matrix norm;
//   * input-projected: beta(R) >= max_{||w||<=R} ||(dV/dw)^T B||, and the
//     Lipschitz vector excludes ||B||. QuadraticLyapunov below uses this one.
struct LyapunovCertificate {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  ComparisonFunction alpha1{ComparisonFunction::power_law(1.0, 2.0)};
  ComparisonFunction alpha2{ComparisonFunction::power_law(1.0, 2.0)};
  ComparisonFunction alpha3{ComparisonFunction::power_law(1.0, 2.0)};
  std::function<double(double)> beta;
};

// V(w) = w^T P w for P solving P*A + A^T*P = -H with A Hurwitz and H
// symmetric positive definite. Bounds: alpha1 = lambda_min(P) s^2,
// alpha2 = lambda_max(P) s^2, alpha3 = lambda_min(H) s^2, and the
// input-projected envelope beta(s) = 2 ||P B|| s.
struct QuadraticLyapunov : LyapunovCertificate {
  QuadraticLyapunov(const Mat& P_in, const Mat& H, const Mat& B);

  // Solves the certificate equation for a given closed-loop error matrix.
  [[nodiscard]] static QuadraticLyapunov from_closed_loop(const Mat& A,
                                                          const Mat& H,
                                                          const Mat& B);

  // Closed form of ultimate_bound() for the quadratic sandwich.
  [[nodiscard]] double ultimate_bound_closed_form(double r) const;

  Mat P;
  double lambda_min_P = 0.0;
  double lambda_max_P = 0.0;
  double a = 0.0;        // lambda_min(H)
  double norm_PB = 0.0;  // spectral norm of P*B
};

namespace detail {
Mat solve_lyapunov_equation_impl(const Mat& A, const Mat& H);
}

// Solves P*A + A^T*P = -H by the dense vectorized route:
// (A^T (x) I + I (x) A^T) vec(P) = -vec(H). Requires A Hurwitz (otherwise
// NonHurwitzError naming the offending eigenvalue) and H symmetric positive
// definite. The result is symmetrized and its residual is verified to
// satisfy ||P A + A^T P + H||_F <= 1e-9 ||H||_F.
template <typename DerivedA, typename DerivedH>
[[nodiscard]] Mat solve_lyapunov_equation(const Eigen::MatrixBase<DerivedA>& A,
                                          const Eigen::MatrixBase<DerivedH>& H) {
  return detail::solve_lyapunov_equation_impl(A.derived(), H.derived());
}

// Radius of the ball the tracking error converges into when triggering is
// enforced outside the r-ball: alpha1^{-1}(alpha2(r)).
[[nodiscard]] double ultimate_bound(double r, const ComparisonFunction& alpha1,
                                    const ComparisonFunction& alpha2);

// Inverse map: the trigger radius r whose ultimate bound equals r1, found by
// bisection refined until the bracket collapses (tighter than 1e-12).
[[nodiscard]] double invert_ultimate_bound(double r1, const ComparisonFunction& alpha1,
                                           const ComparisonFunction& alpha2);

}  // namespace ettrack::core

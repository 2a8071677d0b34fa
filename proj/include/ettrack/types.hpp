#pragma once

#include <Eigen/Dense>
#include <string>

#include "ettrack/errors.hpp"

namespace ettrack {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

[[nodiscard]] inline bool all_finite(const Vec& v) { return v.allFinite(); }
[[nodiscard]] inline bool all_finite(const Mat& m) { return m.allFinite(); }

inline void require_finite(const char* what, const Vec& v) {
  if (!v.allFinite()) {
    throw DomainError(std::string(what) + " contains a non-finite entry");
  }
}

inline void require_finite_scalar(const char* what, double s) {
  if (!std::isfinite(s)) {
    throw DomainError(std::string(what) + " is not finite");
  }
}

inline void require_size(const char* what, const Vec& v, Eigen::Index expected) {
  if (v.size() != expected) {
    throw DimensionMismatchError(std::string(what) + " has size " +
                                 std::to_string(v.size()) + ", expected " +
                                 std::to_string(expected));
  }
}

}  // namespace ettrack

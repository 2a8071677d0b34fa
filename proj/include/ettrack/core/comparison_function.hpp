#pragma once

#include <functional>
#include <vector>

#include "ettrack/errors.hpp"

namespace ettrack::core {

// Strictly increasing continuous map [0,inf) -> [0,inf) with f(0) = 0 and
// f(s) -> inf (a class K-infinity function). These objects carry both the
// forward evaluation and the inverse, because the analysis layer needs
// round trips like alpha1^{-1}(alpha2(R)).
//
// Three flavors:
//   power_law(a, p)   : a * s^p, inverse in closed form
//   tabulated(s, y)   : piecewise-linear through strictly increasing nodes
//                       starting at (0, 0); extrapolates the last segment
//   from_callable(fn) : arbitrary user map, inverse by bracketed bisection
//                       refined until the bracket collapses to adjacent
//                       doubles (well below the 1e-12 contract)
class ComparisonFunction {
 public:
  [[nodiscard]] static ComparisonFunction power_law(double gain, double exponent);
  [[nodiscard]] static ComparisonFunction tabulated(std::vector<double> s,
                                                    std::vector<double> y);
  [[nodiscard]] static ComparisonFunction from_callable(std::function<double(double)> fn);

  double operator()(double s) const { return evaluate(s); }
  [[nodiscard]] double evaluate(double s) const;
  [[nodiscard]] double inverse(double y) const;

  [[nodiscard]] bool is_power_law() const { return kind_ == Kind::PowerLaw; }
  [[nodiscard]] double power_gain() const;
  [[nodiscard]] double power_exponent() const;

 private:
  enum class Kind { PowerLaw, Tabulated, Callable };

  ComparisonFunction() = default;

  Kind kind_ = Kind::PowerLaw;
  double gain_ = 1.0;
  double exponent_ = 1.0;
  std::vector<double> nodes_s_, nodes_y_;
  std::function<double(double)> fn_;
};

}  // namespace ettrack::core

#include "ettrack/core/comparison_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace ettrack::core {

namespace {

void require_nonnegative_argument(double s) {
  if (!(s >= 0.0)) {
    throw DomainError("class-K functions are defined on [0, inf); got argument " +
                      std::to_string(s));
  }
}

void require_nonnegative_value(double y) {
  if (!(y >= 0.0)) {
    throw DomainError("class-K inverses are defined on [0, inf); got value " +
                      std::to_string(y));
  }
}

}  // namespace

ComparisonFunction ComparisonFunction::power_law(double gain, double exponent) {
  if (!std::isfinite(gain) || gain <= 0.0) {
    throw DomainError("power-law gain must be finite and positive");
  }
  if (!std::isfinite(exponent) || exponent <= 0.0) {
    throw DomainError("power-law exponent must be finite and positive");
  }
  ComparisonFunction f;
  f.kind_ = Kind::PowerLaw;
  f.gain_ = gain;
  f.exponent_ = exponent;
  return f;
}

ComparisonFunction ComparisonFunction::tabulated(std::vector<double> s, std::vector<double> y) {
  if (s.size() != y.size()) {
    throw DomainError("tabulated flavor needs one ordinate per abscissa");
  }
  if (s.size() < 2) {
    throw DomainError("tabulated flavor needs at least two nodes");
  }
  if (s.front() != 0.0 || y.front() != 0.0) {
    throw DomainError("tabulated flavor must start at the origin (0, 0)");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || !std::isfinite(y[i])) {
      throw DomainError("tabulated nodes must be finite");
    }
    if (i > 0 && (!(s[i] > s[i - 1]) || !(y[i] > y[i - 1]))) {
      throw DomainError("tabulated nodes must be strictly increasing in both coordinates");
    }
  }
  ComparisonFunction f;
  f.kind_ = Kind::Tabulated;
  f.nodes_s_ = std::move(s);
  f.nodes_y_ = std::move(y);
  return f;
}

ComparisonFunction ComparisonFunction::from_callable(std::function<double(double)> fn) {
  if (!fn) {
    throw DomainError("callable flavor needs a non-empty function");
  }
  ComparisonFunction f;
  f.kind_ = Kind::Callable;
  f.fn_ = std::move(fn);
  return f;
}

double ComparisonFunction::power_gain() const {
  if (kind_ != Kind::PowerLaw) {
    throw DomainError("power_gain is only defined for the power-law flavor");
  }
  return gain_;
}

double ComparisonFunction::power_exponent() const {
  if (kind_ != Kind::PowerLaw) {
    throw DomainError("power_exponent is only defined for the power-law flavor");
  }
  return exponent_;
}

double ComparisonFunction::evaluate(double s) const {
  require_nonnegative_argument(s);
  switch (kind_) {
    case Kind::PowerLaw:
      return gain_ * std::pow(s, exponent_);
    case Kind::Tabulated: {
      const auto& xs = nodes_s_;
      const auto& ys = nodes_y_;
      const std::size_t count = xs.size();
      if (s >= xs.back()) {
        // Extrapolate along the last segment.
        const double slope =
            (ys[count - 1] - ys[count - 2]) / (xs[count - 1] - xs[count - 2]);
        return ys.back() + slope * (s - xs.back());
      }
      const auto it = std::upper_bound(xs.begin(), xs.end(), s);
      const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
      const std::size_t lo = hi - 1;
      const double w = (s - xs[lo]) / (xs[hi] - xs[lo]);
      return ys[lo] + w * (ys[hi] - ys[lo]);
    }
    case Kind::Callable:
      return fn_(s);
  }
  throw DomainError("comparison function has no flavor");
}

double ComparisonFunction::inverse(double y) const {
  require_nonnegative_value(y);
  switch (kind_) {
    case Kind::PowerLaw:
      return std::pow(y / gain_, 1.0 / exponent_);
    case Kind::Tabulated: {
      const auto& xs = nodes_s_;
      const auto& ys = nodes_y_;
      const std::size_t count = ys.size();
      if (y >= ys.back()) {
        const double slope =
            (ys[count - 1] - ys[count - 2]) / (xs[count - 1] - xs[count - 2]);
        return xs.back() + (y - ys.back()) / slope;
      }
      const auto it = std::upper_bound(ys.begin(), ys.end(), y);
      const std::size_t hi = static_cast<std::size_t>(it - ys.begin());
      const std::size_t lo = hi - 1;
      const double w = (y - ys[lo]) / (ys[hi] - ys[lo]);
      return xs[lo] + w * (xs[hi] - xs[lo]);
    }
    case Kind::Callable: {
      if (y == 0.0) {
        return 0.0;
      }
      // Bracket the preimage by doubling, then bisect until the bracket
      // collapses to adjacent doubles.
      double lo = 0.0;
      double hi = 1.0;
      while (fn_(hi) < y) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) {
          throw DomainError("callable comparison function never reaches the requested value");
        }
      }
      while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
          break;
        }
        if (fn_(mid) < y) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return hi;
    }
  }
  throw DomainError("comparison function has no flavor");
}

}  // namespace ettrack::core

#include "ettrack/bounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ettrack::bounds {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double golden_section_min(const std::function<double(double)>& phi, double lo,
                          double hi, double arg_tol) {
  // Plain golden-section search; converges to the cell's interior minimum or
  // to the better edge when the cell is monotone.
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = phi(x1);
  double f2 = phi(x2);
  while (b - a > arg_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = phi(x2);
    }
    if (x1 >= x2) {
      break;
    }
  }
  return std::min({f1, f2, phi(a), phi(b)});
}

BoundReport infeasible(InputClass input_class, const BoundInputs& in, std::string note) {
  BoundReport report;
  report.input_class = input_class;
  report.feasible = false;
  report.delta = in.delta;
  report.r1 = in.r1;
  report.note = std::move(note);
  return report;
}

}  // namespace

const char* to_string(InputClass input_class) {
  switch (input_class) {
    case InputClass::SmoothDerivative:
      return "smooth-derivative";
    case InputClass::BoundedOnly:
      return "bounded-only";
    case InputClass::DwellTimeJumps:
      return "dwell-time-jumps";
  }
  return "unknown";
}

double delta_bound(double s1, double s2, double sigma,
                   const core::ComparisonFunction& alpha3,
                   const std::function<double(double)>& beta) {
  if (!std::isfinite(s1) || !std::isfinite(s2) || !(s1 > 0.0) || !(s1 <= s2)) {
    throw DomainError("deadband scan needs finite radii with 0 < s1 <= s2");
  }
  if (!std::isfinite(sigma) || !(sigma > 0.0) || !(sigma < 1.0)) {
    throw DomainError("trigger share sigma must lie strictly inside (0, 1)");
  }
  auto phi = [&](double s) {
    const double envelope = beta(s);
    if (!(envelope > 0.0)) {
      throw ThresholdUndefinedError("rate envelope beta vanishes inside the deadband scan");
    }
    return sigma * alpha3(s) / envelope;
  };
  if (s1 == s2) {
    return phi(s1);
  }

  constexpr int kGridPoints = 1024;
  const double span = s2 - s1;
  double grid[kGridPoints];
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGridPoints; ++i) {
    const double s = s1 + span * static_cast<double>(i) / (kGridPoints - 1);
    grid[i] = phi(s);
    best = std::min(best, grid[i]);
  }
  // Refine every local basin the grid exposes (not just the global cell):
  // near-tied basins would otherwise be resolved by grid luck alone.
  const double arg_tol = 1e-12 * std::max(1.0, std::abs(s2));
  for (int i = 0; i < kGridPoints; ++i) {
    const bool left_ok = i == 0 || grid[i] <= grid[i - 1];
    const bool right_ok = i == kGridPoints - 1 || grid[i] <= grid[i + 1];
    if (!left_ok || !right_ok) {
      continue;
    }
    const double lo = s1 + span * static_cast<double>(std::max(i - 1, 0)) / (kGridPoints - 1);
    const double hi =
        s1 + span * static_cast<double>(std::min(i + 1, kGridPoints - 1)) / (kGridPoints - 1);
    if (hi > lo) {
      best = std::min(best, golden_section_min(phi, lo, hi, arg_tol));
    }
  }
  return best;
}

BoundReport smooth_input_bound(const BoundInputs& in) {
  if (!(in.delta > 0.0)) {
    return infeasible(InputClass::SmoothDerivative, in,
                      "deadband floor delta is not positive; the trigger error has no room to grow");
  }
  if (!(in.norm_L0 > 0.0)) {
    return infeasible(InputClass::SmoothDerivative, in,
                      "Lipschitz vector norm ||L0|| must be positive");
  }
  const double denominator = in.growth_budget() + in.c;
  if (!(denominator > 0.0)) {
    return infeasible(InputClass::SmoothDerivative, in,
                      "growth budget P0 + c must be positive");
  }
  BoundReport report;
  report.input_class = InputClass::SmoothDerivative;
  report.feasible = true;
  report.delta = in.delta;
  report.r1 = in.r1;
  report.T_lower = std::log1p(in.delta / denominator) / in.norm_L0;
  return report;
}

BoundReport bounded_input_bound(const BoundInputs& in) {
  const double d_v = std::isnan(in.d_v) ? 0.0 : in.d_v;
  const double printed_numerator = in.delta - 2.0 * d_v;
  const double proof_numerator = in.delta - 2.0 * d_v * in.norm_M0;
  const double denominator = in.growth_budget() + 2.0 * d_v * in.norm_M0;

  BoundReport report;
  report.input_class = InputClass::BoundedOnly;
  report.delta = in.delta;
  report.r1 = in.r1;
  report.printed_numerator = printed_numerator;
  report.proof_numerator = proof_numerator;
  if (!(proof_numerator > 0.0)) {
    report.feasible = false;
    report.note =
        "the deadband floor does not clear the input-magnitude budget 2*d_v*||M0||";
    return report;
  }
  if (!(in.norm_Q0 > 0.0) || !(denominator > 0.0)) {
    report.feasible = false;
    report.note = "state-block Lipschitz norm ||Q0|| and growth budget must be positive";
    return report;
  }
  report.feasible = true;
  report.T_lower = std::log1p(printed_numerator / denominator) / in.norm_Q0;
  report.T_proof = std::log1p(proof_numerator / denominator) / in.norm_Q0;
  return report;
}

BoundReport dwell_time_input_bound(const BoundInputs& in) {
  const double jump = std::isnan(in.J_v) ? 0.0 : in.J_v;
  const double budget = jump * in.norm_M0;

  if (budget <= 0.0) {
    // No jump mass at all: the cap k*T_v is vacuous and the smooth-input
    // formula applies verbatim.
    BoundReport report = smooth_input_bound(in);
    report.input_class = InputClass::DwellTimeJumps;
    return report;
  }
  if (!(in.delta > 0.0) || !(in.delta - budget > 0.0)) {
    return infeasible(InputClass::DwellTimeJumps, in,
                      "the deadband floor does not clear the jump budget J_v*||M0||");
  }
  if (!(in.norm_L0 > 0.0)) {
    return infeasible(InputClass::DwellTimeJumps, in,
                      "Lipschitz vector norm ||L0|| must be positive");
  }
  if (!std::isfinite(in.T_v) || !(in.T_v > 0.0)) {
    throw DomainError("dwell-time guarantee needs a finite positive T_v");
  }
  const double denominator = in.growth_budget() + in.c;
  if (!(denominator > 0.0)) {
    return infeasible(InputClass::DwellTimeJumps, in,
                      "growth budget P0 + c must be positive");
  }

  const double n_real = std::floor(in.delta / budget);
  const long N = n_real > 4.5e18 ? static_cast<long>(4.5e18) : static_cast<long>(n_real);
  auto budget_time = [&](long k) {
    return std::log1p((in.delta - k * budget) / denominator) / in.norm_L0;
  };
  auto objective = [&](long k) {
    return std::min(static_cast<double>(k) * in.T_v, budget_time(k));
  };

  double best = 0.0;
  if (N <= 4096) {
    for (long k = 1; k <= N; ++k) {
      best = std::max(best, objective(k));
    }
  } else {
    // budget_time falls and k*T_v rises in k, so the max of their min sits at
    // the crossover: binary search the smallest k with k*T_v >= budget_time(k),
    // then evaluate a safety margin of candidates around it.
    auto capped = [&](long k) {
      return static_cast<double>(k) * in.T_v >= budget_time(k);
    };
    long crossover = N + 1;
    if (capped(1)) {
      crossover = 1;
    } else if (capped(N)) {
      long lo = 1;  // not capped
      long hi = N;  // capped
      while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (capped(mid)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      crossover = hi;
    }
    const long candidates[] = {1,
                               N,
                               std::clamp(crossover - 2, 1L, N),
                               std::clamp(crossover - 1, 1L, N),
                               std::clamp(crossover, 1L, N),
                               std::clamp(crossover + 1, 1L, N),
                               std::clamp(crossover + 2, 1L, N)};
    for (const long k : candidates) {
      best = std::max(best, objective(k));
    }
  }

  BoundReport report;
  report.input_class = InputClass::DwellTimeJumps;
  report.feasible = true;
  report.delta = in.delta;
  report.r1 = in.r1;
  report.T_lower = best;
  return report;
}

std::vector<BoundReport> feasibility_report(const BoundInputs& in, bool has_rate_bound,
                                            bool has_dwell_metadata) {
  std::vector<BoundReport> reports;
  if (has_rate_bound) {
    reports.push_back(smooth_input_bound(in));
  }
  if (has_dwell_metadata) {
    reports.push_back(dwell_time_input_bound(in));
  }
  if (!has_rate_bound && !has_dwell_metadata) {
    reports.push_back(bounded_input_bound(in));
  }
  return reports;
}

double min_feasible_radius(double jump_budget, double mu0, double sigma,
                           const core::ComparisonFunction& alpha3,
                           const std::function<double(double)>& beta, double tol) {
  if (!std::isfinite(jump_budget) || jump_budget < 0.0) {
    throw DomainError("jump budget must be finite and nonnegative");
  }
  if (!std::isfinite(mu0) || !(mu0 > 0.0)) {
    throw DomainError("region radius mu0 must be finite and positive");
  }
  if (!std::isfinite(tol) || !(tol > 0.0)) {
    throw DomainError("bisection tolerance must be finite and positive");
  }
  auto clears = [&](double r) {
    return delta_bound(r, mu0, sigma, alpha3, beta) > jump_budget;
  };
  if (!clears(mu0)) {
    return kNan;
  }
  double lo = 0.0;  // infeasible by convention (the deadband scan needs r > 0)
  double hi = mu0;
  // Stop when the bracket is small relative to the answer itself, so tiny
  // radii come back with full relative accuracy, not just absolute.
  while (hi - lo > tol * std::max(hi, tol)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (clears(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

BoundInputs assemble_bound_inputs(const sim::Scenario& scenario, int samples,
                                  std::uint64_t seed,
                                  const std::optional<systems::LipschitzConstants>& overrides) {
  const auto& reference = scenario.reference;
  require_size("initial plant state", scenario.x0, scenario.model.n);
  require_size("initial reference state", reference.x_d0, scenario.model.n);
  trigger::validate(scenario.trigger);

  BoundInputs in;
  in.sigma = scenario.trigger.sigma;
  in.r = scenario.trigger.r;
  in.norm_xt0 = std::max((scenario.x0 - reference.x_d0).norm(), scenario.trigger.r);
  in.mu0 = scenario.certificate.alpha1.inverse(scenario.certificate.alpha2(in.norm_xt0));
  in.d = reference.d;
  in.c = reference.rate_bound_c.value_or(reference.dwell ? reference.dwell->c : 0.0);
  if (reference.d_v) {
    in.d_v = *reference.d_v;
  }
  if (reference.dwell) {
    in.T_v = reference.dwell->T_v;
    in.J_v = reference.dwell->J_v;
  }

  const systems::LipschitzConstants constants =
      overrides ? *overrides
                : systems::estimate_lipschitz_constants(
                      scenario.model, scenario.certificate,
                      core::LevelSetSpec{in.norm_xt0, reference.d}, samples, seed);
  in.P1 = constants.P1;
  in.P2 = constants.P2;
  in.P3 = constants.P3;

  const Vec L0 = scenario.lipschitz.L(in.norm_xt0);
  if (L0.size() != scenario.lipschitz.xi_dim ||
      scenario.lipschitz.state_block > L0.size()) {
    throw DimensionMismatchError("sensitivity envelope size does not match the stack");
  }
  in.norm_L0 = L0.norm();
  in.norm_Q0 = L0.head(scenario.lipschitz.state_block).norm();
  in.norm_M0 = L0.tail(L0.size() - scenario.lipschitz.state_block).norm();

  in.delta = delta_bound(scenario.trigger.r, std::max(in.mu0, scenario.trigger.r),
                         scenario.trigger.sigma, scenario.certificate.alpha3,
                         scenario.certificate.beta);
  in.r1 = core::ultimate_bound(scenario.trigger.r, scenario.certificate.alpha1,
                               scenario.certificate.alpha2);
  return in;
}

}  // namespace ettrack::bounds

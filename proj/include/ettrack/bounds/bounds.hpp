#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ettrack/core/comparison_function.hpp"
#include "ettrack/sim/scenario.hpp"
#include "ettrack/systems/lipschitz_estimation.hpp"

namespace ettrack::bounds {

// Which assumption on the exogenous input v a guarantee relies on.
// The numeric values double as report ids.
enum class InputClass {
  SmoothDerivative = 1,  // ||v_dot|| <= c
  BoundedOnly = 2,       // only ||v|| <= d_v
  DwellTimeJumps = 3,    // jumps <= J_v, dwell >= T_v, rate c between jumps
};

[[nodiscard]] const char* to_string(InputClass input_class);

// Everything the analytic inter-execution-time bounds consume. norm_xt0 is
// the error norm at arming for the smooth-input bound and the region radius
// R0 for the other two; mu0 = alpha1^{-1}(alpha2(norm_xt0)) is the worst
// error norm inside the certificate sublevel set seeded there.
struct BoundInputs {
  double sigma = 0.0;
  double r = 0.0;
  double norm_xt0 = 0.0;
  double mu0 = 0.0;
  double d = 0.0;

  double c = 0.0;
  double d_v = std::numeric_limits<double>::quiet_NaN();
  double T_v = std::numeric_limits<double>::quiet_NaN();
  double J_v = std::numeric_limits<double>::quiet_NaN();

  double P1 = 0.0, P2 = 0.0, P3 = 0.0;
  double norm_L0 = 0.0;  // full Lipschitz vector at the seed radius
  double norm_Q0 = 0.0;  // its [x_tilde; x_d] block
  double norm_M0 = 0.0;  // its v block

  double delta = std::numeric_limits<double>::quiet_NaN();  // min of sigma*alpha3/beta on [r, mu0]
  double r1 = std::numeric_limits<double>::quiet_NaN();

  // P0 = P1*mu0 + (P2 + P3)*d, the worst closed-loop speed in the region.
  [[nodiscard]] double growth_budget() const { return P1 * mu0 + (P2 + P3) * d; }
};

struct BoundReport {
  InputClass input_class = InputClass::SmoothDerivative;
  bool feasible = false;
  double T_lower = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double r1 = std::numeric_limits<double>::quiet_NaN();
  std::string note;

  // BoundedOnly extras: the reported formula's numerator (delta - 2 d_v),
  // the proof-consistent one (delta - 2 d_v ||M0||), and the lower bound the
  // proof-consistent numerator yields. Feasibility uses the proof form.
  double printed_numerator = std::numeric_limits<double>::quiet_NaN();
  double proof_numerator = std::numeric_limits<double>::quiet_NaN();
  double T_proof = std::numeric_limits<double>::quiet_NaN();
};

// Minimum of sigma * alpha3(s) / beta(s) over [s1, s2] (the trigger level
// the error term must climb to). 1024-point grid scan localizing the
// minimum, golden-section refinement of the bracketing cell to 1e-12 on the
// argument. Requires 0 < s1 <= s2.
[[nodiscard]] double delta_bound(double s1, double s2, double sigma,
                                 const core::ComparisonFunction& alpha3,
                                 const std::function<double(double)>& beta);

// T = (1/||L0||) * ln(1 + delta / (P0 + c)). Feasible whenever the deadband
// floor is positive (delta > 0); there is no jump budget to clear.
[[nodiscard]] BoundReport smooth_input_bound(const BoundInputs& in);

// T = (1/||Q0||) * ln(1 + (delta - 2 d_v) / (P0 + 2 d_v ||M0||)) as
// reported; feasibility requires the proof-consistent numerator
// delta - 2 d_v ||M0|| > 0. Both numerators are carried in the report.
[[nodiscard]] BoundReport bounded_input_bound(const BoundInputs& in);

// T = max_{1 <= k <= N} min(k * T_v, T_k) with N = floor(delta / (J_v ||M0||))
// and T_k = (1/||L0||) * ln(1 + (delta - k J_v ||M0||) / (P0 + c)).
// Feasible iff delta - J_v ||M0|| > 0. J_v ||M0|| = 0 degenerates to the
// smooth-input formula (the k*T_v cap becomes vacuous).
[[nodiscard]] BoundReport dwell_time_input_bound(const BoundInputs& in);

// One report per guarantee whose assumptions the scenario's reference
// metadata satisfies: rate bound -> SmoothDerivative, dwell metadata ->
// DwellTimeJumps, neither -> BoundedOnly.
[[nodiscard]] std::vector<BoundReport> feasibility_report(const BoundInputs& in,
                                                          bool has_rate_bound,
                                                          bool has_dwell_metadata);

// Smallest trigger radius whose delta_bound(r, mu0) exceeds jump_budget
// (= J_v ||M0|| for the dwell-time guarantee, 2 d_v ||M0|| for the
// bounded-input one), by bisection; NaN if even r = mu0 is infeasible.
[[nodiscard]] double min_feasible_radius(double jump_budget, double mu0, double sigma,
                                         const core::ComparisonFunction& alpha3,
                                         const std::function<double(double)>& beta,
                                         double tol = 1e-9);

// Assembles BoundInputs from a scenario: seeds norm_xt0 from the initial
// error (max(||x0 - x_d0||, r)), evaluates the Lipschitz vector there, and
// estimates P1..P3 by sampling unless explicit constants are supplied.
[[nodiscard]] BoundInputs assemble_bound_inputs(
    const sim::Scenario& scenario, int samples = 100000,
    std::uint64_t seed = 0x243f6a8885a308d3ull,
    const std::optional<systems::LipschitzConstants>& overrides = {});

}  // namespace ettrack::bounds

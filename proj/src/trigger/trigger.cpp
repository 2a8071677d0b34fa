#include "ettrack/trigger/trigger.hpp"

#include <cmath>
#include <sstream>

namespace ettrack::trigger {

void validate(const TriggerParams& params) {
  if (!std::isfinite(params.sigma) || !(params.sigma > 0.0) || !(params.sigma < 1.0)) {
    throw DomainError("trigger share sigma must lie strictly inside (0, 1)");
  }
  if (!std::isfinite(params.r) || !(params.r > 0.0)) {
    throw DomainError("quiet radius r must be finite and positive");
  }
}

TriggerState TriggerState::unarmed(int xi_dim, int input_dim) {
  if (xi_dim <= 0 || input_dim <= 0) {
    throw DimensionMismatchError("trigger state needs positive stack and input dimensions");
  }
  TriggerState state;
  state.armed = false;
  state.event_index = -1;
  state.held_xi = Vec::Zero(xi_dim);
  state.held_u = Vec::Zero(input_dim);
  state.L_current = Vec::Zero(xi_dim);
  return state;
}

Vec measurement_error(const Vec& held_xi, const Vec& xi_now) {
  if (held_xi.size() != xi_now.size()) {
    std::ostringstream message;
    message << "held stack has " << held_xi.size() << " components, current has "
            << xi_now.size();
    throw DimensionMismatchError(message.str());
  }
  return held_xi - xi_now;
}

double trigger_threshold(double norm_x_tilde, double sigma,
                         const core::LyapunovCertificate& cert) {
  require_finite_scalar("error norm", norm_x_tilde);
  if (norm_x_tilde < 0.0) {
    throw DomainError("error norm must be nonnegative");
  }
  if (norm_x_tilde == 0.0) {
    return 0.0;
  }
  const double envelope = cert.beta(norm_x_tilde);
  if (!(envelope > 0.0)) {
    std::ostringstream message;
    message << "rate envelope beta vanishes at ||x_tilde|| = " << norm_x_tilde
            << "; the trigger threshold is undefined there";
    throw ThresholdUndefinedError(message.str());
  }
  return sigma * cert.alpha3(norm_x_tilde) / envelope;
}

double trigger_function(const Vec& e, const Vec& x_tilde, const Vec& L,
                        const TriggerParams& params,
                        const core::LyapunovCertificate& cert) {
  if (e.size() != L.size()) {
    std::ostringstream message;
    message << "measurement error has " << e.size() << " components, ledger has "
            << L.size();
    throw DimensionMismatchError(message.str());
  }
  return L.dot(e.cwiseAbs()) - trigger_threshold(x_tilde.norm(), params.sigma, cert);
}

Vec update_lipschitz_ledger(const std::optional<Vec>& prev_L, double norm_xt_at_event,
                            const systems::LipschitzVectorProvider& provider) {
  const Vec candidate = provider.L(norm_xt_at_event);
  if (candidate.size() != provider.xi_dim) {
    throw DimensionMismatchError("sensitivity envelope size does not match the stack");
  }
  if (!prev_L) {
    return candidate;
  }
  if (prev_L->size() != candidate.size()) {
    throw DimensionMismatchError("ledger size does not match the sensitivity envelope");
  }
  return prev_L->cwiseMin(candidate);
}

TriggerState fire_event(const TriggerState& state, const Vec& xi_now, int n,
                        const std::function<Vec(const Vec&)>& gamma,
                        const systems::LipschitzVectorProvider& provider,
                        const TriggerParams& params, bool update_ledger) {
  if (xi_now.size() != state.held_xi.size()) {
    throw DimensionMismatchError("current stack does not match the trigger state");
  }
  const double norm_xt = xi_now.head(n).norm();
  if (norm_xt < params.r) {
    return state;
  }
  TriggerState next = state;
  next.armed = true;
  next.event_index = state.event_index + 1;
  next.held_xi = xi_now;
  next.held_u = gamma(xi_now);
  if (!state.armed) {
    // Arming always seeds the ledger, frozen runs included.
    next.L_current = update_lipschitz_ledger(std::nullopt, norm_xt, provider);
  } else if (update_ledger) {
    next.L_current = update_lipschitz_ledger(state.L_current, norm_xt, provider);
  }
  return next;
}

}  // namespace ettrack::trigger

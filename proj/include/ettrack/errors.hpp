#pragma once

#include <stdexcept>
#include <string>

namespace ettrack {

// Base class for all toolkit failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A vector or matrix had the wrong size for the operation.
struct DimensionMismatchError : Error {
  using Error::Error;
};

// A scalar argument lay outside the operation's domain (bad interval,
// non-positive gain, sigma outside (0,1), ...).
struct DomainError : Error {
  using Error::Error;
};

// The closed-loop error matrix has an eigenvalue with nonnegative real part,
// so no positive definite certificate exists for it.
struct NonHurwitzError : Error {
  using Error::Error;
};

// A system model failed its construction checks (inconsistent dimensions or
// a drifting equilibrium at the origin).
struct ModelConsistencyError : Error {
  using Error::Error;
};

// The sampling region handed to the growth-constant estimator is not a
// bounded set (non-finite radius or reference bound).
struct RegionUnboundedError : Error {
  using Error::Error;
};

// The trigger threshold sigma*alpha3(s)/beta(s) is undefined because
// beta(s) vanished at a norm where the trigger must be evaluated.
struct ThresholdUndefinedError : Error {
  using Error::Error;
};

// Base class for aborts raised while a simulation is running.
struct SimulationError : Error {
  using Error::Error;
};

// More events fired inside one guard window than the configured maximum;
// the run is aborted before accumulation can stall it.
struct ZenoSuspectedError : SimulationError {
  using SimulationError::SimulationError;
};

// A runtime certificate check failed (decrease rate, sublevel containment,
// or the reference leaving its declared bound).
struct InvariantViolationError : SimulationError {
  using SimulationError::SimulationError;
};

// A state component left the representable range (|value| > 1e12).
struct NumericalBlowupError : SimulationError {
  using SimulationError::SimulationError;
};

// A scenario config file could not be parsed or failed validation.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace ettrack

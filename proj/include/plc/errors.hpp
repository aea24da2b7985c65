#pragma once

#include <stdexcept>
#include <string>

namespace plc {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the family's domain (eta <= 0, theta <= 0, ...).
struct ParameterDomainError : Error {
  using Error::Error;
};

/// Sample fails a hard precondition (N < 2, non-finite values, zero variance).
struct DegenerateSampleError : Error {
  using Error::Error;
};

/// Invalid argument (derivative order out of range, bad probability, ...).
struct ArgumentError : Error {
  using Error::Error;
};

/// Numeric failure: non-finite accumulation, quadrature breakdown.
struct NumericError : Error {
  using Error::Error;
};

/// A limit-law assumption fails its numeric check.
struct AssumptionError : Error {
  using Error::Error;
};

/// Monte Carlo engine hit too many degenerate-sample retries.
struct SimulationIntegrityError : Error {
  using Error::Error;
};

}  // namespace plc

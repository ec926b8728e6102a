#pragma once

#include <stdexcept>
#include <string>

namespace einlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The metric (or an induced metric) is not positive definite at the point.
class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

/// A field does not carry enough derivatives for the requested operator.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation (chart box, parameter range).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference stencil could not be evaluated.
class StencilError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerics failed (bracketing, convergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Two independent routes to the same quantity disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Operation is undefined in the requested dimension.
class UnsupportedDimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid model parameters (e.g. the de Sitter admissibility inequality).
class ParameterError : public Error {
 public:
  using Error::Error;
};

}  // namespace einlab

#pragma once

#include <stdexcept>
#include <string>

namespace rbc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// A realization was requested for a zero-order system.
class InvalidOrderError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be Hurwitz is not.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied input breaks the documented precondition of an operation.
class ContractViolationError : public Error {
 public:
  using Error::Error;
};

class InvalidEstimatorError : public Error {
 public:
  using Error::Error;
};

/// Simulation inputs are inconsistent; raised before any integration starts.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbc

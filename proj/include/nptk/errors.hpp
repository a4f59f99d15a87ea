#pragma once

#include <stdexcept>
#include <string>

namespace nptk {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input, violated constructor invariant.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a map (|a| >= 1 for a Moebius map, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Input for which an operation is not meaningful, e.g. a constant function
/// handed to the norm-preserving extension formula.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class NoWitnessError : public Error {
 public:
  using Error::Error;
};

class UnsupportedInputError : public Error {
 public:
  using Error::Error;
};

class InsufficientSeriesError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations that must agree did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace nptk

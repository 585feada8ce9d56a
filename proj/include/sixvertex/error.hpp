#pragma once

#include <stdexcept>
#include <string>

namespace sixv {

/// Root of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input (bad decimal literal, bad range syntax, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Argument outside a function's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the declared phase region; the message names the
/// violated inequality.
class PhaseDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Cancellation in a determinant exceeded what the working precision can
/// absorb.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// Series, quadrature or extrapolation did not reach its target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace sixv

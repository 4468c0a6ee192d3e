#pragma once

#include <stdexcept>
#include <string>

namespace pim {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of an operation (zero vector,
/// nonpositive quantity value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A model or a user-supplied basis fails validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Rescaling would leave exact rational arithmetic.
class UnsupportedRescale : public Error {
 public:
  using Error::Error;
};

/// An operation was called on input that does not meet its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Internal consistency check failed. Always a bug, never a user error.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace pim

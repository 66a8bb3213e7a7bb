#pragma once

#include <stdexcept>
#include <string>

namespace vage {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or domain restriction was violated (bad generator, window
/// mismatch, singular expectation, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// E[f] (or E[M] for matrices) is not invertible.
class NotInvertibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The Våge constant A(d) is infinite for the requested d.
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Numerical failure: overflow, a scalar series that does not settle,
/// quadrature refinement that does not agree.
class NumericError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class OverflowError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace vage

#pragma once

#include <stdexcept>
#include <string>

namespace salemlab {

/// Base of every error raised by the library. The CLI maps these to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. digamma at x <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested exactly at a pole.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Result or an intermediate would leave the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Point lies outside the range where the algorithm's error bound is validated.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Quadrature did not meet its tolerance within the configured budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Incompatible or malformed sampling grid.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Too many spectral bins had to be regularized away.
class SingularSymbolError : public Error {
 public:
  using Error::Error;
};

/// Translate Gram matrix singular beyond the ridge jitter.
class RankError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a sieve or table limit.
class LimitError : public Error {
 public:
  using Error::Error;
};

/// Scan would exceed the cell budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace salemlab

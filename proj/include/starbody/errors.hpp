#pragma once

#include <stdexcept>
#include <string>

namespace starbody {

// Input outside the mathematical domain of an operation (non-finite
// coordinates, a body without a distinguished half-line, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A caller-side precondition was violated.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Slope below 1/2; the caller is expected to swap the axes.
class NormalizationError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Numeric failures. These map to exit status 3 in the CLI.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Floating-point continued fraction no longer reflects the input.
class PrecisionError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Level curve not found within the search bracket.
class UnboundedWidthError : public NumericError {
 public:
  using NumericError::NumericError;
};

class OverflowError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace starbody

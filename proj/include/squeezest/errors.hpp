#pragma once

#include <stdexcept>
#include <string>

namespace squeezest {

// Bad input: invalid parameters, malformed grids, precondition violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical-quality check failed (truncation, normalization, aliasing,
// window capture). The inputs were well-formed but the result is not
// trustworthy at the configured resolution.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridTooSmallError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SupportOverflowError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class FrameError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NormalizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class WindowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LogGridUnderflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace squeezest

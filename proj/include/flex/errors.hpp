#pragma once

#include <stdexcept>
#include <string>

namespace flex {

// Base of every error the library throws. The CLI maps subclasses onto exit
// codes, so new error kinds should derive from one of the classes below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration: bad RopeSpec, window budgets, gate thresholds.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Out-of-range sampler parameter such as |rho| > 1.
class ParameterError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Argument outside the mathematical domain of a closed form (PSD poles).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// Caller violated an operation precondition (empty input, too few samples).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Frames pushed into a window out of order.
class SequencingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace flex

#pragma once

#include <stdexcept>
#include <string>

namespace gpmag {

/// Invalid configuration or argument (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GridMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A hypothesis of the underlying inequality is violated by the input (exit code 2).
class HypothesisError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Non-finite values or a numerical breakdown (exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gpmag

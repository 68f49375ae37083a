#pragma once

#include <stdexcept>
#include <string>

namespace rrmc {

// Invalid input, schema violation, or resource cap exceeded. CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Factorization failure, non-finite values, solver breakdown. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested storage would exceed the configured memory cap.
class CapacityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace rrmc

#pragma once

#include <stdexcept>
#include <string>

namespace qdep {

// Raised when raw observations or input files are unusable: mismatched column
// lengths, non-finite values, malformed CSV, empty data.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a numeric argument lies outside the mathematical domain of an
// operation, e.g. evaluating a copula outside the unit square or normalizing
// at a degenerate point where the null standard deviation vanishes.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a requested configuration is inconsistent or unsupported:
// invalid grid sizes, bad calibration parameters, unknown statistic names.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for scenario models whose sampling algorithm is intentionally not
// provided. Subtype of ConfigError so callers can treat it as a config issue.
class NotImplementedError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Raised when the calibration cache cannot be created, read, or trusted.
class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdep

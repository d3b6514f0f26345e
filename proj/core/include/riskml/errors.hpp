#pragma once

#include <stdexcept>
#include <string>

namespace riskml {

/// Bad or out-of-range input data: malformed CSV, invalid records, corrupted model files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value or could not proceed numerically.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or arguments are reported with std::invalid_argument.

}  // namespace riskml

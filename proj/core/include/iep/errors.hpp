#pragma once

#include <stdexcept>
#include <string>

namespace iep {

// Malformed or unreadable input data (CSV files, out-of-support observations).
// The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid flag values or flag combinations. The CLI maps this to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace iep

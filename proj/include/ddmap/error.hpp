#pragma once

#include <stdexcept>

namespace ddmap {

/// Data-dependent failure: no cycles found, degenerate kernel, solver breakdown.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or configuration value was violated.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ddmap

#pragma once

#include <stdexcept>

namespace cbai {

// Config file absent or unreadable (CLI exit 2).
struct ConfigFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config parsed but invalid (CLI exit 3).
struct ConfigValueError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance gaps do not satisfy the separation assumption (CLI exit 4).
struct InfeasibleGapError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace cbai

#pragma once

#include <stdexcept>
#include <string>

namespace oqa {

/// Violated precondition or malformed input.
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A configurable work cap was hit before a fixpoint was reached.
struct cap_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace oqa

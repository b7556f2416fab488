#pragma once

#include <stdexcept>

namespace collabnet {

/// Problems with user-supplied data or options. The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numeric routine could not produce a usable result. CLI exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace collabnet

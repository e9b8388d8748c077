#pragma once

#include <stdexcept>
#include <string>

namespace trcm {

/// Invalid parameters or inputs (bad config, out-of-support bids, shape mismatches).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Filesystem failures while emitting results.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trcm

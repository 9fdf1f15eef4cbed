// Error categories the command-line driver maps to exit codes.
#pragma once

#include <stdexcept>

namespace wg {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wg

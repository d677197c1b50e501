#pragma once

#include <stdexcept>
#include <string>

namespace scmpc {

// Invalid problem data supplied at construction time (distribution
// parameters, matrix dimensions, inadmissible sample-removal pairs, ...).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// API misuse: preconditions violated by the caller (dimension mismatch,
// out-of-range arguments).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to meet its tolerance contract.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scenario program infeasible with hard constraints. time_index is the
// closed-loop step at which the failure occurred, or -1 outside a loop.
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what, long time = -1)
      : std::runtime_error(what), time_index(time) {}
  long time_index;
};

}  // namespace scmpc

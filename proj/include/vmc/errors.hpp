#pragma once

#include <stdexcept>
#include <string>

namespace vmc {

// Numerical failures inside linear algebra or iteration loops (CLI exit code 4).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values produced by an IRLS update. `iteration` is 1-based,
// or -1 when the failing step was invoked outside a solver loop.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, int iteration)
      : NumericalError(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

// Malformed input files: CSV matrices, masks, experiment configs (exit code 3).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Explicit lift refused because N*s exceeds the materialization budget.
class LiftBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vmc

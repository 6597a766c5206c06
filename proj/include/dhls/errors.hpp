#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dhls {

/// Dense storage was requested for a grid larger than the configured limit.
class CapacityError : public std::length_error {
public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

/// A precondition of a numerical contract was violated (e.g. ||A|| >= 1
/// handed to the contraction solver, or a wrong grid convention).
class ContractViolation : public std::invalid_argument {
public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

/// An iterative solver hit its iteration budget. Carries the partial state
/// so the caller can inspect how far the run got.
class NonConvergence : public std::runtime_error {
public:
  NonConvergence(const std::string& what, double value_estimate,
                 double residual, int iterations,
                 std::vector<double> partial = {})
      : std::runtime_error(what),
        value_estimate(value_estimate),
        residual(residual),
        iterations(iterations),
        partial(std::move(partial)) {}

  double value_estimate;
  double residual;
  int iterations;
  std::vector<double> partial;
};

}  // namespace dhls

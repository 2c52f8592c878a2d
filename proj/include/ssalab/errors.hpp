#pragma once

#include <stdexcept>
#include <string>

namespace ssalab {

/// Parameters or inputs that violate a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-convergence, overflow guard trips, or a computation leaving its
/// regime of validity.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ssalab

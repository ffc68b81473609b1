#pragma once

#include <stdexcept>
#include <string>

namespace logplate {

// Bad arguments or violated preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Quadrature disagreement, singular operators, non-convergence.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace logplate

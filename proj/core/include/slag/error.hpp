#pragma once

#include <stdexcept>
#include <string>

namespace slag {

// Precondition violations: bad dimensions, out-of-range indices, inputs off the
// phase level set, and similar caller errors.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not deliver its contract (root certification,
// integration, bracketing).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slag

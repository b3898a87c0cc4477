#pragma once

#include <stdexcept>
#include <string>

namespace popax {

// Bad input shape: malformed files, out-of-range parameters, broken
// preconditions the caller could have checked up front.  CLI maps this to
// exit code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input on which the requested quantity does not exist:
// undefined threshold, no sign change in a bracket, rank statistics over
// fractional counts, a family without a value function.  CLI exit code 3.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace popax

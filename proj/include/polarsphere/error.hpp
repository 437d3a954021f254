#pragma once

#include <stdexcept>
#include <string>

namespace polarsphere {

// Bad arguments: dimension mismatch, out-of-range angle, malformed set spec.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Arguments outside the support of a law (e.g. eta / y > 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Density or ratio evaluated at a point where it is unbounded.
class SingularInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Polarization history too long for the membership oracle.
class DepthLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polarsphere

#pragma once

#include <stdexcept>
#include <string>

namespace fqaoa {

// Raised when a well-formed request cannot be computed: the exhaustive size
// guard, a non-positive coefficient scale, a distribution that cannot be
// renormalized.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a caller breaks a precondition (mismatched widths, empty sets).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace fqaoa

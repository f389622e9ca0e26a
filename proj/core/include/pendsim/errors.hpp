#pragma once

#include <stdexcept>
#include <string>

namespace pendsim {

/// Parameter set violates a documented invariant.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input lies outside the domain where an operation is defined
/// (e.g. |beta| at the transform singularity).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace pendsim

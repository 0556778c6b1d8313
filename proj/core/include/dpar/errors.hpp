#pragma once

#include <stdexcept>
#include <string>

namespace dpar {

// Bad user-supplied parameter (eps out of range, infeasible generator request, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input file or in-memory structure that does not parse or violates its format.
struct MalformedInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InstanceTooLarge : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// Caller broke a documented precondition.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// A by-construction inequality failed. Always a bug.
struct CertificateViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace dpar

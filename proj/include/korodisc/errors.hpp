#pragma once

#include <stdexcept>
#include <string>

namespace korodisc {

// Caller-side contract violations: bad arguments, failed mathematical
// preconditions, non-prime moduli. The CLI maps these to exit code 2.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact integer arithmetic would overflow.
class RangeError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// An enumeration or exact computation exceeds a configured size limit (exit code 3).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive search finished without a result.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two independent computations of the same quantity disagree (exit code 4).
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace korodisc

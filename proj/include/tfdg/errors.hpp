#pragma once

#include <stdexcept>
#include <string>

namespace tfdg {

// Error categories map one-to-one onto the lab CLI exit codes.

/// Invalid argument or out-of-range index (exit code 2).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A coefficient or data function violates its sign/compatibility
/// requirement at a sampled point (exit code 3).
class CoefficientError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Linear or nonlinear solve failed (exit code 4).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written (exit code 5).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant, e.g. a root finder that failed to converge.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tfdg

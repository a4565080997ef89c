#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace disinfo {

// Scenario / input validation failure. Message carries the offending
// path, e.g. "params.beta: must be >= 0".
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A state or adjoint component exceeded the magnitude guard or became
// non-finite during integration.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& msg, double t)
      : std::runtime_error(msg + " (t=" + std::to_string(t) + ")"), time(t) {}
  double time;
};

// An iterative solver (Newton, FBSM) exhausted its iteration budget.
class NoConvergenceError : public std::runtime_error {
 public:
  explicit NoConvergenceError(const std::string& msg)
      : std::runtime_error(msg) {}
  // Objective value per completed iteration, for diagnosing FBSM stalls.
  std::vector<double> j_history;
};

// Bisection bracket endpoints do not straddle the Track/Tip transition.
class NonMonotonicBracketError : public std::runtime_error {
 public:
  explicit NonMonotonicBracketError(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace disinfo

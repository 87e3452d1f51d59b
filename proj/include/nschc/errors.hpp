#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nschc {

/// Right-hand side of a singular (zero-flux or periodic) problem has a mean
/// that is too large to be rounding noise.
class SolvabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solve failed to converge, or a step produced non-finite data.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A monitored invariant was broken (negative concentration beyond the
/// clipping threshold, phase field blow-up, ...).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PositivityError : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

/// One problem found while reading a configuration.
struct ConfigIssue {
  int line = 0;       // 0 when the problem is not tied to a line
  std::string field;  // "section.key" or empty
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

}  // namespace nschc

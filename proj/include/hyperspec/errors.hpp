#pragma once

#include <stdexcept>
#include <string>

namespace hyperspec {

/// Invalid arguments or configuration: violated preconditions, malformed grids.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Arguments outside the mathematical domain of a function (e.g. Re z <= 0 for log-gamma).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine failed to reach its tolerance. Carries the tolerance actually achieved.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_tolerance)
      : std::runtime_error(what + " (achieved tolerance " + std::to_string(achieved_tolerance) + ")"),
        achieved_(achieved_tolerance) {}

  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace hyperspec

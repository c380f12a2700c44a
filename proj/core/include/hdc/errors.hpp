#pragma once

#include <stdexcept>
#include <string>

namespace hdc {

/// Caller supplied an argument outside an operation's domain.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A field update produced (or was handed) a non-finite value.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, int i, int j)
      : std::runtime_error(what + " at node (" + std::to_string(i) + "," + std::to_string(j) + ")"),
        i_(i), j_(j) {}

  int i() const noexcept { return i_; }
  int j() const noexcept { return j_; }

 private:
  int i_;
  int j_;
};

/// Raised when the tip-movement substep is too large for P0 >= 0.
class StepSizeViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hdc

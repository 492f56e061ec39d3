#pragma once

#include <stdexcept>
#include <string>

namespace fbz {

/// Bad input: grid parameters, config keys, mismatched grids, unknown ids.
/// The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The time integration cannot continue (non-finite values, substepping
/// exhausted). The CLI maps this to exit code 2.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Thrown by a single split step when dt * max L exceeds the positivity
/// factor. Carries the largest admissible step.
class SubstepRequest : public std::runtime_error {
 public:
  explicit SubstepRequest(double admissible_dt)
      : std::runtime_error("collision positivity condition violated"),
        admissible_dt_(admissible_dt) {}
  double admissible_dt() const noexcept { return admissible_dt_; }

 private:
  double admissible_dt_;
};

}  // namespace fbz

#pragma once

#include <stdexcept>
#include <string>

namespace bfam {

/// A non-finite value appeared while evaluating the evolution. The stepper
/// treats this as blow-up evidence; stage is the RK4 stage (1..4) or 0 when
/// raised outside a step.
class OverflowError : public std::runtime_error {
 public:
  OverflowError(const std::string& what, int stage = 0) : std::runtime_error(what), stage_(stage) {}
  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

/// An operator received non-finite samples.
class NonFiniteInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace bfam

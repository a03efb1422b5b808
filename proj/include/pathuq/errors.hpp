#pragma once
#include <stdexcept>
#include <string>

namespace pathuq {

// Failure categories surfaced by the numerical kernels and model builders.
enum class ErrorKind {
  empty_domain,       // objective is +inf at every probed point
  non_finite,         // NaN encountered during evaluation
  max_subdivisions,   // quadrature tolerance not met within the depth budget
  not_spd,            // matrix expected symmetric positive-definite is not
  sign_mismatch,      // hitting-time level and drift have opposite signs
  beyond_branch,      // exponential-moment argument past the real branch point
  invalid_phase_type, // (nu, T) fails the sub-generator constraints
  non_ergodic,        // mean sojourn time diverges
  state_space_too_large,
  abs_cont_violation, // alternative kernel charges a null transition
  not_stabilizable,
  no_convergence,
  non_integrable,
  invalid_argument,
  assumption_violated,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace pathuq

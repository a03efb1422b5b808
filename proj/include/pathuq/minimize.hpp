#pragma once
#include <functional>
#include <limits>

namespace pathuq::num {

// Scalar objective on the open interval (0, domain_hi).  The evaluator may
// return +inf outside the finite region; it must be quasiconvex (unimodal)
// where finite.  Callers with a nonzero left endpoint shift their variable.
struct ScalarObjective {
  std::function<double(double)> eval;
  double domain_hi = std::numeric_limits<double>::infinity();
};

enum class MinStatus {
  interior,     // bracketed minimum strictly inside the domain
  boundary_lo,  // infimum approached as x -> 0+
  boundary_hi,  // infimum approached as x -> domain_hi-
};

struct MinimizeResult {
  double x = 0.0;
  double f = std::numeric_limits<double>::infinity();
  MinStatus status = MinStatus::interior;
  bool at_boundary() const { return status != MinStatus::interior; }
};

// Bracket expansion (geometric, factor 2) followed by golden-section.
// Boundary infima are reported as the value at the last ladder probe with the
// matching status instead of an error; quasiconvexity is the caller contract.
// Throws Error{empty_domain} when no probe is finite, Error{non_finite} on NaN.
MinimizeResult minimize_scalar(const ScalarObjective& obj, double rel_tol = 1e-8);

}  // namespace pathuq::num

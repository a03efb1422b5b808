#pragma once
#include <functional>
#include <limits>

namespace pathuq::bounds {

// A cumulant generating function c -> log E[exp(c F)] together with the right
// endpoint of its finite domain (the evaluator returns +inf for c >= c_max).
// `centered` records whether F has been replaced by F - E[F], i.e. whether
// bounds built from this handle constrain the bias rather than the mean.
struct CgfHandle {
  std::function<double(double)> eval;
  double c_max = std::numeric_limits<double>::infinity();
  bool centered = false;

  // Smallest |argument| at which eval is numerically trustworthy.  Handles
  // backed by quadrature carry absolute noise that bound objectives divide
  // by the argument; optimizers freeze the CGF term at this magnitude, which
  // keeps the reported value a true objective value (slightly above the
  // boundary infimum).  Zero means analytic accuracy down to 0.
  double arg_floor = 0.0;

  double operator()(double c) const { return eval(c); }
};

}  // namespace pathuq::bounds

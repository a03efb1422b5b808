#pragma once
#include <functional>
#include <utility>
#include <vector>

#include "pathuq/cgf.hpp"
#include "pathuq/quadrature.hpp"

namespace pathuq::bounds {

enum class Side { upper, lower };

enum class BoundStatus {
  interior,        // optimizer strictly inside the domain
  boundary_limit,  // infimum approached at an open endpoint (c -> 0 or c_max)
  infinite,        // objective +inf everywhere; the bound is vacuous
};

// One-sided bound.  `value` is the signed bound on the target expectation
// (on the bias when the CGF is centered): upper side means target <= value,
// lower side means target >= value.
struct BoundResult {
  double value = 0.0;
  double optimizer = 0.0;  // c* (reported in the c parameterization)
  Side side = Side::upper;
  BoundStatus status = BoundStatus::interior;
};

// Budget on a goal-oriented relative entropy: either a scalar eta0 or the
// affine form eta0 + rate * E[tau ^ n] produced by Girsanov-type arguments.
struct RelEntBudget {
  enum class Kind { scalar, affine_in_stopped_time };
  double eta0 = 0.0;
  double rate = 0.0;  // coefficient of E[tau ^ n]
  Kind kind = Kind::scalar;

  static RelEntBudget scalar(double eta0);
  static RelEntBudget affine(double eta0, double rate);
};

// E_P[exp(z * payoff + penalty)] against a baseline sampling law: either a
// density on (0, inf) with an optional atom at +inf, or a discrete support.
struct TiltedExpectation {
  // Continuous part (ignored when `support` is nonempty).
  std::function<double(double)> log_density;
  double atom_mass = 0.0;
  double atom_payoff = 0.0;
  double atom_penalty = 0.0;

  // Discrete support: (point, probability); payoff/penalty applied to points.
  std::vector<std::pair<double, double>> support;

  std::function<double(double)> payoff;
  std::function<double(double)> penalty;  // zero function allowed via nullptr

  // Tight tolerances: bound objectives divide the log-expectation by the
  // tilt, so quadrature noise is amplified near the small-tilt boundary.
  num::QuadratureSpec quad{1e-15, 1e-12, 50};

  bool discrete() const { return !support.empty(); }
  // log E[exp(z * payoff + penalty)], +inf when the expectation diverges.
  double log_tilted(double z) const;
};

// inf over c in (0, c_max) of Lambda(+-c)/c + eta/c, solved in the convex
// eta = 1/c parameterization.  With a centered handle the result bounds the
// bias +-(E_alt[F] - E_base[F]); uncentered, the mean itself.
BoundResult info_bound(const CgfHandle& cgf, double eta, Side side);

// inf over c > 0 of (1/c) log E[exp(+-c F + G)].
BoundResult tilted_bound(const TiltedExpectation& t, Side side);

struct ProbInterval {
  double lower = 0.0;
  double upper = 1.0;
};

// Two-sided bound on the probability of an event of baseline probability p
// under every alternative within relative-entropy distance eta, clamped to
// [0, 1].  Total: never fails.
ProbInterval event_prob_bound(double p, double eta);

// inf over lambda > 1 of Lambda_G(lambda) / (lambda - 1): an upper bound on
// the goal-oriented relative entropy valid whenever R <= E_alt[G].  Returns
// +inf when Lambda_G is infinite for every lambda > 1.
double rel_ent_bootstrap(const CgfHandle& cgf_G);

struct MeanInterval {
  BoundResult lower;
  BoundResult upper;
};

// Interval for E_alt[tau] from the uncentered CGF of tau under an affine
// budget eta0 + K E[tau ^ n]:
//   lower = -inf_{c>0} (c+K)^{-1} (Lambda(-c) + eta0),
//   upper =  inf_{K<lambda<c_max} (lambda-K)^{-1} (Lambda(lambda) + eta0).
// The upper side is infinite when c_max <= K.
MeanInterval stopping_time_mean_bound(const CgfHandle& cgf_tau,
                                      const RelEntBudget& budget);

// Discounting weight: exponential rate*exp(-rate*s) ds or a tabulated density
// given as (s, density) knots integrated by the trapezoid rule.
struct DiscountMeasure {
  enum class Kind { exponential, tabulated };
  Kind kind = Kind::exponential;
  double rate = 1.0;
  std::vector<std::pair<double, double>> table;

  static DiscountMeasure exponential(double rate);
  static DiscountMeasure tabulated(std::vector<std::pair<double, double>> knots);

  // integral of g against the weight; exponential weights are truncated where
  // exp(-rate*s) < 1e-12 with a conservative tail estimate handled by callers.
  double integrate(const std::function<double(double)>& g) const;
  double horizon() const;  // truncation point for the exponential kind
};

enum class DiscountMode { inside, outside };

// Weighted-in-time bound on E_alt[int f_s weight(ds)].
//   inside:  int_s inf_c { Lambda_s(+-c)/c + eta_s/c } weight(ds)
//   outside: inf_c { int_s Lambda_s(+-c)/c weight(ds) + D/c },
//            D = int_s eta_s weight(ds)
// inside never exceeds outside on the upper side (and never falls below it on
// the lower side).  Throws Error{non_integrable} when a per-s bound is
// infinite inside the integral.
double discounted_bound(const std::function<CgfHandle(double)>& cgf_family,
                        const std::function<double(double)>& eta_family,
                        const DiscountMeasure& weight, Side side,
                        DiscountMode mode);

}  // namespace pathuq::bounds

#pragma once
#include "pathuq/cgf.hpp"

namespace pathuq::cgf {

// Level-a hitting time of the drifted unit Brownian motion mu*t + W_t started
// at 0.  The law has density |a|/sqrt(2 pi t^3) exp(-(a - mu t)^2 / (2 t)) on
// (0, inf) and an atom at +inf of mass 1 - exp(mu a - |mu a|) (zero when mu
// and a share a sign).
struct DriftedBMHittingLaw {
  double level;  // a != 0
  double drift;  // mu

  DriftedBMHittingLaw(double a, double mu);

  double density(double t) const;
  double log_density(double t) const;
  double cdf(double t) const;
  double atom() const;
  bool same_sign() const;

  // a / mu when the hitting time is a.s. finite.
  double mean() const;
};

// Lambda_tau(c) = |a mu| - |a| sqrt(mu^2 - 2c) for c < mu^2 / 2, +inf beyond.
// Requires sign(a) == sign(mu); throws Error{sign_mismatch} otherwise.
double hitting_cgf(const DriftedBMHittingLaw& law, double c);

// CgfHandle over hitting_cgf with c_max = mu^2 / 2 (uncentered).
bounds::CgfHandle hitting_cgf_handle(const DriftedBMHittingLaw& law);

}  // namespace pathuq::cgf

#pragma once

namespace pathuq::cgf {

// Exponential moments of the squared Ornstein-Uhlenbeck integral that drives
// the variable-rate option budget:
//   d(dr)_t = -gamma * dr_t dt + vol_rate dW_t, dr_0 = 0,
// paired with an asset volatility vol_asset in the functional
//   E[exp(lam * vol_asset^{-2}/2 * int_0^t dr_s^2 ds)].
struct OUSquaredIntegral {
  double gamma;      // mean reversion > 0
  double vol_rate;   // OU volatility  > 0
  double vol_asset;  // asset volatility > 0

  // Real branch requires lam < vol_asset^2 gamma^2 / vol_rate^2.
  double branch_point() const {
    return vol_asset * vol_asset * gamma * gamma / (vol_rate * vol_rate);
  }
};

// log E[exp(lam * sigma^{-2}/2 * int_0^t dr^2)] =
//   gamma t / 2 - 1/2 log( sinh(gamma t sqrt(w))/sqrt(w) + cosh(gamma t sqrt(w)) ),
// w = 1 - lam / branch_point.  Returns +inf for lam at/past the branch point.
double ou_squared_log_mgf(const OUSquaredIntegral& p, double t, double lam);

// Exponential moment itself; 1 at lam = 0 or t = 0.
double ou_squared_mgf(const OUSquaredIntegral& p, double t, double lam);

// Var of int_0^t dr_s ds:
//   vol_rate^2 (2 gamma t + 4 e^{-gamma t} - e^{-2 gamma t} - 3) / (2 gamma^3),
// with a series fallback where the bracket cancels catastrophically.
double integrated_ou_variance(const OUSquaredIntegral& p, double t);

}  // namespace pathuq::cgf

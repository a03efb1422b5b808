#include "pathuq/ou_squared.hpp"

#include <cmath>
#include <limits>

#include "pathuq/errors.hpp"

namespace pathuq::cgf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const OUSquaredIntegral& p) {
  if (!(p.gamma > 0.0) || !(p.vol_rate > 0.0) || !(p.vol_asset > 0.0))
    raise(ErrorKind::invalid_argument, "OU parameters must be positive");
}
}  // namespace

double ou_squared_log_mgf(const OUSquaredIntegral& p, double t, double lam) {
  validate(p);
  if (t < 0.0) raise(ErrorKind::invalid_argument, "time must be nonnegative");
  if (t == 0.0 || lam == 0.0) return 0.0;
  const double w = 1.0 - lam / p.branch_point();
  if (w <= 0.0) return kInf;  // beyond the real branch
  const double x = p.gamma * t;
  const double rw = std::sqrt(w);
  const double z = x * rw;
  // bracket = sinh(z)/rw + cosh(z); evaluated in log form so large gamma*t
  // cannot overflow:  bracket = e^z [ (1 + 1/rw) + e^{-2z} (1 - 1/rw) ] / 2.
  double log_bracket;
  if (z > 1e-4) {
    // bracket = e^z/2 * (1 + 1/rw) + e^{-z}/2 * (1 - 1/rw)
    log_bracket = z - std::log(2.0) +
                  std::log((1.0 + 1.0 / rw) +
                           std::exp(-2.0 * z) * (1.0 - 1.0 / rw));
  } else {
    // sinh(z)/rw + cosh(z) with series-stable small-z evaluation.
    const double sinh_over = (std::abs(z) < 1e-8)
                                 ? x * (1.0 + z * z / 6.0)
                                 : std::sinh(z) / rw;
    log_bracket = std::log(sinh_over + std::cosh(z));
  }
  return 0.5 * x - 0.5 * log_bracket;
}

double ou_squared_mgf(const OUSquaredIntegral& p, double t, double lam) {
  const double lv = ou_squared_log_mgf(p, t, lam);
  return std::isinf(lv) ? kInf : std::exp(lv);
}

double integrated_ou_variance(const OUSquaredIntegral& p, double t) {
  validate(p);
  if (t < 0.0) raise(ErrorKind::invalid_argument, "time must be nonnegative");
  const double x = p.gamma * t;
  double bracket;
  if (x < 0.05) {
    // Coefficient of x^k in 2x + 4e^{-x} - e^{-2x} - 3 is (4(-1)^k - (-2)^k)/k!.
    bracket = 0.0;
    double sign = -1.0, pow2 = -8.0, fact = 6.0, xk = x * x * x;
    for (int k = 3; k <= 14; ++k) {
      bracket += (4.0 * sign - pow2) / fact * xk;
      sign = -sign;
      pow2 *= -2.0;
      xk *= x;
      fact *= (k + 1);
    }
  } else {
    bracket = 2.0 * x + 4.0 * std::exp(-x) - std::exp(-2.0 * x) - 3.0;
  }
  const double g = p.gamma;
  return p.vol_rate * p.vol_rate * bracket / (2.0 * g * g * g);
}

}  // namespace pathuq::cgf

#include "pathuq/hitting_law.hpp"

#include <cmath>

#include "pathuq/errors.hpp"

namespace pathuq::cgf {

namespace {
double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }
}  // namespace

DriftedBMHittingLaw::DriftedBMHittingLaw(double a, double mu)
    : level(a), drift(mu) {
  if (a == 0.0) raise(ErrorKind::invalid_argument, "hitting level must be nonzero");
}

double DriftedBMHittingLaw::log_density(double t) const {
  const double a = level, mu = drift;
  return std::log(std::abs(a)) - 0.5 * std::log(2.0 * M_PI) -
         1.5 * std::log(t) - (a - mu * t) * (a - mu * t) / (2.0 * t);
}

double DriftedBMHittingLaw::density(double t) const {
  if (!(t > 0.0)) return 0.0;
  return std::exp(log_density(t));
}

double DriftedBMHittingLaw::cdf(double t) const {
  if (!(t > 0.0)) return 0.0;
  // Mirror to a > 0; the law of the hitting time is invariant under flipping
  // the signs of both a and mu.
  const double a = std::abs(level);
  const double mu = (level > 0.0) ? drift : -drift;
  const double rt = std::sqrt(t);
  return normal_cdf((mu * t - a) / rt) +
         std::exp(2.0 * mu * a) * normal_cdf((-mu * t - a) / rt);
}

double DriftedBMHittingLaw::atom() const {
  const double p = drift * level;
  return 1.0 - std::exp(p - std::abs(p));
}

bool DriftedBMHittingLaw::same_sign() const {
  return level * drift > 0.0;
}

double DriftedBMHittingLaw::mean() const {
  if (!same_sign())
    raise(ErrorKind::sign_mismatch, "hitting time is defective; no finite mean");
  return level / drift;
}

double hitting_cgf(const DriftedBMHittingLaw& law, double c) {
  if (!law.same_sign())
    raise(ErrorKind::sign_mismatch,
          "hitting-time CGF requires drift and level of the same sign");
  const double a = std::abs(law.level), mu = std::abs(law.drift);
  const double disc = mu * mu - 2.0 * c;
  if (disc <= 0.0) return std::numeric_limits<double>::infinity();
  // a*mu - a*sqrt(mu^2 - 2c) in product form; the direct difference loses
  // absolute accuracy ~ a*mu*eps near c = 0, which bound objectives divide
  // by c and amplify.
  return 2.0 * a * c / (mu + std::sqrt(disc));
}

bounds::CgfHandle hitting_cgf_handle(const DriftedBMHittingLaw& law) {
  if (!law.same_sign())
    raise(ErrorKind::sign_mismatch,
          "hitting-time CGF requires drift and level of the same sign");
  bounds::CgfHandle h;
  h.eval = [law](double c) { return hitting_cgf(law, c); };
  h.c_max = 0.5 * law.drift * law.drift;
  h.centered = false;
  return h;
}

}  // namespace pathuq::cgf

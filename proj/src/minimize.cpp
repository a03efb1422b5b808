#include "pathuq/minimize.hpp"

#include <cmath>
#include <vector>

#include "pathuq/errors.hpp"

namespace pathuq::num {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double checked_eval(const ScalarObjective& obj, double x) {
  const double v = obj.eval(x);
  if (std::isnan(v)) raise(ErrorKind::non_finite, "objective returned NaN");
  return v;
}

// Probe ladder used to locate a finite anchor point.  For a bounded domain we
// approach the right endpoint through hi*(1 - 2^-k) and the left through
// hi*2^-k; for an unbounded one we fan out geometrically from 1.
std::vector<double> anchor_probes(double hi) {
  std::vector<double> probes;
  if (std::isinf(hi)) {
    probes.push_back(1.0);
    for (int k = 1; k <= 48; ++k) {
      probes.push_back(std::ldexp(1.0, -k));
      probes.push_back(std::ldexp(1.0, k));
    }
  } else {
    probes.push_back(0.5 * hi);
    for (int k = 2; k <= 48; ++k) {
      probes.push_back(hi * (1.0 - std::ldexp(1.0, -k)));
      probes.push_back(hi * std::ldexp(1.0, -k));
    }
  }
  return probes;
}

double toward_hi(double x, double hi) {
  return std::isinf(hi) ? 2.0 * x : x + 0.5 * (hi - x);
}

}  // namespace

MinimizeResult minimize_scalar(const ScalarObjective& obj, double rel_tol) {
  const double hi = obj.domain_hi;
  if (!(hi > 0.0)) raise(ErrorKind::invalid_argument, "domain_hi must be positive");

  double b = kInf, fb = kInf;
  for (double x : anchor_probes(hi)) {
    const double v = checked_eval(obj, x);
    if (std::isfinite(v)) {
      b = x;
      fb = v;
      break;
    }
  }
  if (!std::isfinite(fb))
    raise(ErrorKind::empty_domain, "objective is +inf at every probed point");

  const double anchor = b;
  // Ladder steps whose improvement is below evaluation noise still count as
  // progress toward a boundary infimum; without the allowance a numerically
  // flat tail stops the walk early and misreports an interior minimum.
  auto keeps_descending = [](double f_next, double f_cur) {
    if (std::isinf(f_next)) return false;  // never walk into the +inf region
    return f_next <= f_cur + 1e-14 * (std::abs(f_next) + std::abs(f_cur));
  };

  double a = 0.5 * b, fa = checked_eval(obj, a);
  double c = toward_hi(b, hi), fc = checked_eval(obj, c);

  if (fa < fb) {
    // Decreasing toward 0: walk the 2^-k ladder until it turns or bottoms out.
    while (true) {
      c = b;
      fc = fb;
      b = a;
      fb = fa;
      a = 0.5 * a;
      if (a < anchor * 0x1p-70) return {b, fb, MinStatus::boundary_lo};
      fa = checked_eval(obj, a);
      if (!keeps_descending(fa, fb)) break;
    }
  } else {
    while (keeps_descending(fc, fb)) {
      a = b;
      fa = fb;
      b = c;
      fb = fc;
      c = toward_hi(c, hi);
      const bool exhausted = std::isinf(hi) ? (c > anchor * 0x1p70)
                                            : (hi - c < hi * 0x1p-70);
      if (exhausted) return {b, fb, MinStatus::boundary_hi};
      fc = checked_eval(obj, c);
    }
  }

  // Golden-section on the bracket [a, c]; (b, fb) tracks the incumbent best.
  constexpr double kGold = 0.3819660112501051;  // 2 - golden ratio
  double x1 = a + kGold * (c - a), f1 = checked_eval(obj, x1);
  double x2 = c - kGold * (c - a), f2 = checked_eval(obj, x2);
  for (int it = 0; it < 400; ++it) {
    if (c - a <= rel_tol * (std::abs(x1) + std::abs(x2))) break;
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = a + kGold * (c - a);
      f1 = checked_eval(obj, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = c - kGold * (c - a);
      f2 = checked_eval(obj, x2);
    }
    if (f1 < fb) b = x1, fb = f1;
    if (f2 < fb) b = x2, fb = f2;
  }
  return {b, fb, MinStatus::interior};
}

}  // namespace pathuq::num

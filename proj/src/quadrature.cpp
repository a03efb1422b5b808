#include "pathuq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "pathuq/errors.hpp"

namespace pathuq::num {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SimpsonCtx {
  const std::function<double(double)>* f;
  double abs_tol;
  double rel_tol;
  int max_depth;
  double scale = 0.0;  // running magnitude estimate for the relative test
};

double eval_interior(const SimpsonCtx& ctx, double x) {
  const double v = (*ctx.f)(x);
  if (std::isnan(v) || std::isinf(v))
    raise(ErrorKind::non_finite, "integrand not finite at interior point");
  return v;
}

double simpson_recurse(SimpsonCtx& ctx, double a, double b, double fa,
                       double fm, double fb, double whole, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = eval_interior(ctx, lm), frm = eval_interior(ctx, rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double both = left + right;
  const double err = both - whole;
  const double tol = std::max(ctx.abs_tol, ctx.rel_tol * ctx.scale);
  if (std::abs(err) <= 15.0 * tol) return both + err / 15.0;
  if (depth >= ctx.max_depth)
    raise(ErrorKind::max_subdivisions, "quadrature tolerance not met");
  const double l = simpson_recurse(ctx, a, m, fa, flm, fm, left, depth + 1);
  ctx.scale = std::max(ctx.scale, std::abs(l));
  const double r = simpson_recurse(ctx, m, b, fm, frm, fb, right, depth + 1);
  return l + r;
}

// Simpson over [a, b] where endpoint values are supplied by the caller
// (possibly zero-limits for transformed endpoints).  The interval is split
// into fixed strata before any adaptivity so that a narrow spike cannot be
// skipped by an early agreement of the top-level estimates.
double adaptive_simpson(SimpsonCtx& ctx, double a, double b, double fa,
                        double fb) {
  constexpr int kStrata = 128;
  const double h = (b - a) / kStrata;

  std::vector<double> edge(kStrata + 1), mid(kStrata);
  edge[0] = fa;
  edge[kStrata] = fb;
  for (int i = 1; i < kStrata; ++i) edge[i] = eval_interior(ctx, a + i * h);
  double coarse = 0.0;
  for (int i = 0; i < kStrata; ++i) {
    mid[i] = eval_interior(ctx, a + (i + 0.5) * h);
    coarse += h / 6.0 * (edge[i] + 4.0 * mid[i] + edge[i + 1]);
  }
  ctx.scale = std::abs(coarse);
  // Error budget split across strata.
  ctx.abs_tol /= kStrata;
  ctx.rel_tol /= kStrata;

  double total = 0.0;
  for (int i = 0; i < kStrata; ++i) {
    const double lo = a + i * h, hi = lo + h;
    const double whole = h / 6.0 * (edge[i] + 4.0 * mid[i] + edge[i + 1]);
    total += simpson_recurse(ctx, lo, hi, edge[i], mid[i], edge[i + 1], whole, 0);
  }
  return total;
}

double endpoint_value(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  return std::isfinite(v) ? v : 0.0;  // limit convention at endpoints
}

}  // namespace

double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec) {
  auto g = [&f](double u) {
    const double om = 1.0 - u;
    return f(u / om) / (om * om);
  };
  std::function<double(double)> gf = g;
  SimpsonCtx ctx{&gf, spec.abs_tol, spec.rel_tol, spec.max_subdivisions};
  const double g0 = endpoint_value(gf, 0.0);
  // u = 1 maps to t = inf; an integrable tail forces the transformed limit 0.
  return adaptive_simpson(ctx, 0.0, 1.0, g0, 0.0);
}

double integrate_finite(const std::function<double(double)>& f, double a,
                        double b, const QuadratureSpec& spec) {
  if (!(b > a)) return 0.0;
  SimpsonCtx ctx{&f, spec.abs_tol, spec.rel_tol, spec.max_subdivisions};
  return adaptive_simpson(ctx, a, b, endpoint_value(f, a),
                          endpoint_value(f, b));
}

namespace {

GaussRule compute_hermite(int n) {
  // Roots of the order-n Hermite polynomial by Newton iteration on the
  // orthonormal recurrence; classic initial guesses (Numerical Recipes).
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  double z = 0.0, pp = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(n, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    for (int it = 0; it < 100; ++it) {
      double p1 = std::pow(M_PI, -0.25), p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    rule.nodes[i] = z;                  // stored descending for i < m
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

GaussRule compute_legendre(int n) {
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

const GaussRule& cached_rule(int order, GaussRule (*make)(int),
                             std::map<int, GaussRule>& cache,
                             std::mutex& mutex) {
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make(order)).first;
  return it->second;
}

}  // namespace

const GaussRule& gauss_hermite_rule(int order) {
  if (order < 2) raise(ErrorKind::invalid_argument, "Hermite order must be >= 2");
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  return cached_rule(order, compute_hermite, cache, mutex);
}

const GaussRule& gauss_legendre_rule(int order) {
  if (order < 2) raise(ErrorKind::invalid_argument, "Legendre order must be >= 2");
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  return cached_rule(order, compute_legendre, cache, mutex);
}

double gauss_hermite_nd(const std::function<double(const Eigen::VectorXd&)>& g,
                        const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                        int order) {
  const int d = static_cast<int>(mean.size());
  if (d != 1 && d != 2)
    raise(ErrorKind::invalid_argument, "gauss_hermite_nd supports d in {1, 2}");
  if (cov.rows() != d || cov.cols() != d)
    raise(ErrorKind::invalid_argument, "covariance dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    raise(ErrorKind::not_spd, "covariance is not positive-definite");
  const Eigen::MatrixXd L = llt.matrixL();
  const GaussRule& rule = gauss_hermite_rule(order);
  const double norm = std::pow(M_PI, -0.5 * d);
  const double root2 = std::sqrt(2.0);

  double sum = 0.0;
  Eigen::VectorXd x(d), zvec(d);
  if (d == 1) {
    for (int i = 0; i < order; ++i) {
      zvec(0) = rule.nodes[i];
      x = mean + root2 * (L * zvec);
      sum += rule.weights[i] * g(x);
    }
  } else {
    for (int i = 0; i < order; ++i) {
      for (int j = 0; j < order; ++j) {
        zvec(0) = rule.nodes[i];
        zvec(1) = rule.nodes[j];
        x = mean + root2 * (L * zvec);
        sum += rule.weights[i] * rule.weights[j] * g(x);
      }
    }
  }
  return norm * sum;
}

double log_integral_semi_infinite(
    const std::function<double(double)>& log_f,
    const std::vector<std::pair<double, double>>& atoms,
    const QuadratureSpec& spec) {
  // Locate the largest exponent: coarse grid in the transformed variable,
  // then two local refinements around the incumbent so sharp peaks cannot
  // leave the shift hundreds of nats below the true maximum.
  auto probe = [&log_f](double u) {
    const double v = log_f(u / (1.0 - u));
    if (std::isnan(v)) raise(ErrorKind::non_finite, "log-integrand NaN");
    return v;
  };
  double shift = -kInf, u_best = 0.5;
  double lo = 0.0, hi = 1.0;
  for (int level = 0; level < 3; ++level) {
    const int n = 256;
    const double step = (hi - lo) / n;
    for (int j = 1; j < n; ++j) {
      const double u = lo + j * step;
      const double v = probe(u);
      if (v > shift) shift = v, u_best = u;
    }
    lo = std::max(0.0, u_best - step);
    hi = std::min(1.0, u_best + step);
  }
  for (const auto& [mass, log_v] : atoms)
    if (mass > 0.0) shift = std::max(shift, log_v);
  if (std::isinf(shift) && shift > 0) return kInf;
  if (std::isinf(shift)) shift = 0.0;  // everything vanishes; integrate raw

  auto f = [&](double t) { return std::exp(log_f(t) - shift); };
  double integral = integrate_semi_infinite(f, spec);
  for (const auto& [mass, log_v] : atoms)
    if (mass > 0.0) integral += mass * std::exp(log_v - shift);
  return shift + std::log(integral);
}

}  // namespace pathuq::num

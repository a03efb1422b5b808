#include "pathuq/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "pathuq/errors.hpp"
#include "pathuq/minimize.hpp"

namespace pathuq::bounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sign_of(Side side) { return side == Side::upper ? 1.0 : -1.0; }

// Minimize f over the reciprocal variable m = 1/c with m in (m_lo, inf),
// where m_lo = 1/c_max enforces c < c_max.  The shifted variable keeps the
// minimizer's (0, hi) domain convention.
struct ReciprocalSolve {
  double value;      // inf of the objective
  double c_star;     // optimizer mapped back to c
  BoundStatus status;
};

ReciprocalSolve solve_reciprocal(const std::function<double(double)>& f_of_m,
                                 double m_lo) {
  num::ScalarObjective obj;
  obj.eval = [&f_of_m, m_lo](double theta) { return f_of_m(m_lo + theta); };
  try {
    const num::MinimizeResult r = num::minimize_scalar(obj);
    const double m_star = m_lo + r.x;
    return {r.f, 1.0 / m_star,
            r.at_boundary() ? BoundStatus::boundary_limit
                            : BoundStatus::interior};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::empty_domain)
      return {kInf, 0.0, BoundStatus::infinite};
    throw;
  }
}

// Direct minimization over x in (0, hi); used for objectives already convex
// or quasiconvex in their natural variable.
ReciprocalSolve solve_direct(const std::function<double(double)>& f,
                             double hi) {
  num::ScalarObjective obj;
  obj.eval = f;
  obj.domain_hi = hi;
  try {
    const num::MinimizeResult r = num::minimize_scalar(obj);
    return {r.f, r.x,
            r.at_boundary() ? BoundStatus::boundary_limit
                            : BoundStatus::interior};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::empty_domain)
      return {kInf, 0.0, BoundStatus::infinite};
    throw;
  }
}

}  // namespace

RelEntBudget RelEntBudget::scalar(double eta0) {
  if (!(eta0 >= 0.0) || !std::isfinite(eta0))
    raise(ErrorKind::invalid_argument, "eta0 must be finite and nonnegative");
  return {eta0, 0.0, Kind::scalar};
}

RelEntBudget RelEntBudget::affine(double eta0, double rate) {
  if (!(eta0 >= 0.0) || !(rate >= 0.0) || !std::isfinite(eta0) ||
      !std::isfinite(rate))
    raise(ErrorKind::invalid_argument, "budget coefficients must be finite and nonnegative");
  return {eta0, rate, Kind::affine_in_stopped_time};
}

double TiltedExpectation::log_tilted(double z) const {
  auto exponent = [this, z](double x) {
    double e = z * (payoff ? payoff(x) : 0.0);
    if (penalty) e += penalty(x);
    return e;
  };
  if (discrete()) {
    double shift = -kInf;
    for (const auto& [x, p] : support)
      if (p > 0.0) shift = std::max(shift, exponent(x));
    if (std::isinf(shift)) return shift > 0 ? kInf : -kInf;
    double sum = 0.0;
    for (const auto& [x, p] : support)
      if (p > 0.0) sum += p * std::exp(exponent(x) - shift);
    return shift + std::log(sum);
  }
  auto log_f = [this, &exponent](double t) {
    return log_density(t) + exponent(t);
  };
  std::vector<std::pair<double, double>> atoms;
  if (atom_mass > 0.0)
    atoms.emplace_back(atom_mass, z * atom_payoff + atom_penalty);
  try {
    return num::log_integral_semi_infinite(log_f, atoms, quad);
  } catch (const Error& e) {
    // A divergent tilt shows up as unresolvable growth near the endpoint;
    // report it as +inf so optimizers treat the point as out of domain.
    if (e.kind() == ErrorKind::max_subdivisions) return kInf;
    throw;
  }
}

BoundResult info_bound(const CgfHandle& cgf, double eta, Side side) {
  if (!(eta >= 0.0) || !std::isfinite(eta))
    raise(ErrorKind::invalid_argument, "eta must be finite and nonnegative");
  const double sgn = sign_of(side);
  const double m_lo = (side == Side::upper && std::isfinite(cgf.c_max))
                          ? 1.0 / cgf.c_max
                          : 0.0;
  const double m_cap = cgf.arg_floor > 0.0 ? 1.0 / cgf.arg_floor : kInf;
  auto objective = [&cgf, eta, sgn, m_cap](double m) {
    const double mc = std::min(m, m_cap);
    return mc * cgf.eval(sgn / mc) + eta * m;
  };
  const ReciprocalSolve r = solve_reciprocal(objective, m_lo);
  BoundResult out;
  out.side = side;
  out.status = r.status;
  out.optimizer = r.c_star;
  out.value = (side == Side::upper) ? r.value : -r.value;
  return out;
}

BoundResult tilted_bound(const TiltedExpectation& t, Side side) {
  const double sgn = sign_of(side);
  // The tilted expectation is always quadrature/log-sum-exp backed, so the
  // tilt magnitude is floored where evaluation noise would dominate.
  const double m_cap = 1e5;
  auto objective = [&t, sgn, m_cap](double m) {
    const double mc = std::min(m, m_cap);
    return mc * t.log_tilted(sgn / mc);
  };
  const ReciprocalSolve r = solve_reciprocal(objective, 0.0);
  BoundResult out;
  out.side = side;
  out.status = r.status;
  out.optimizer = r.c_star;
  out.value = (side == Side::upper) ? r.value : -r.value;
  return out;
}

ProbInterval event_prob_bound(double p, double eta) {
  if (!(p >= 0.0 && p <= 1.0))
    raise(ErrorKind::invalid_argument, "p must be a probability");
  if (!(eta >= 0.0)) raise(ErrorKind::invalid_argument, "eta must be >= 0");
  // Centered Bernoulli CGF, evaluated with the max exponent factored out.
  CgfHandle bern;
  bern.centered = true;
  bern.eval = [p](double z) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    const double e1 = z * (1.0 - p), e2 = -z * p;
    if (std::max(std::abs(e1), std::abs(e2)) <= 30.0) {
      // expm1/log1p form keeps the O(z^2) small-z regime at full accuracy;
      // the naive log-sum-exp leaves O(z) cancellation noise that bound
      // objectives divide by z.
      return std::log1p(p * std::expm1(e1) + (1.0 - p) * std::expm1(e2));
    }
    const double m = std::max(e1, e2);
    return m + std::log(p * std::exp(e1 - m) + (1.0 - p) * std::exp(e2 - m));
  };
  const BoundResult up = info_bound(bern, eta, Side::upper);
  const BoundResult lo = info_bound(bern, eta, Side::lower);
  ProbInterval out;
  out.upper = std::clamp(p + up.value, 0.0, 1.0);
  out.lower = std::clamp(p + lo.value, 0.0, 1.0);
  return out;
}

double rel_ent_bootstrap(const CgfHandle& cgf_G) {
  // inf over lambda > 1, substituted m = lambda - 1.  The m -> 0 boundary is
  // the L'Hopital limit Lambda'(1); evaluation noise there is divided by m,
  // so the objective is frozen below a floor (the frozen value sits slightly
  // above the infimum, which keeps the budget an upper bound).
  const double hi =
      std::isfinite(cgf_G.c_max) ? cgf_G.c_max - 1.0 : kInf;
  if (!(hi > 0.0)) return kInf;  // no lambda > 1 inside the domain
  const double m_floor = std::max(1e-6, cgf_G.arg_floor);
  auto objective = [&cgf_G, m_floor](double m) {
    const double mf = std::max(m, m_floor);
    return cgf_G.eval(1.0 + mf) / mf;
  };
  const ReciprocalSolve r = solve_direct(objective, hi);
  return r.value;
}

MeanInterval stopping_time_mean_bound(const CgfHandle& cgf_tau,
                                      const RelEntBudget& budget) {
  if (budget.kind != RelEntBudget::Kind::affine_in_stopped_time)
    raise(ErrorKind::invalid_argument,
          "stopping-time bound needs an affine budget");
  if (cgf_tau.centered)
    raise(ErrorKind::invalid_argument, "stopping-time bound needs the uncentered CGF");
  const double eta0 = budget.eta0, K = budget.rate;

  MeanInterval out;
  // Upper: inf over lambda in (K, c_max) of (Lambda(lambda)+eta0)/(lambda-K).
  const double hi = std::isfinite(cgf_tau.c_max) ? cgf_tau.c_max - K : kInf;
  const double floor = cgf_tau.arg_floor;
  if (!(hi > 0.0)) {
    out.upper = {kInf, 0.0, Side::upper, BoundStatus::infinite};
  } else {
    const double m_floor = std::max(0.0, floor - K);
    auto up_obj = [&cgf_tau, eta0, K, m_floor](double m) {
      const double mf = std::max(m, m_floor);
      return (cgf_tau.eval(K + mf) + eta0) / mf;
    };
    const ReciprocalSolve r = solve_direct(up_obj, hi);
    out.upper = {r.value, K + r.c_star, Side::upper, r.status};
  }
  // Lower: -inf over c > 0 of (Lambda(-c)+eta0)/(c+K).
  auto lo_obj = [&cgf_tau, eta0, K, floor](double c) {
    const double cf = std::max(c, floor);
    return (cgf_tau.eval(-cf) + eta0) / (cf + K);
  };
  const ReciprocalSolve r = solve_direct(lo_obj, kInf);
  out.lower = {-r.value, r.c_star, Side::lower, r.status};
  return out;
}

DiscountMeasure DiscountMeasure::exponential(double rate) {
  if (!(rate > 0.0)) raise(ErrorKind::invalid_argument, "discount rate must be > 0");
  DiscountMeasure w;
  w.kind = Kind::exponential;
  w.rate = rate;
  return w;
}

DiscountMeasure DiscountMeasure::tabulated(
    std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2)
    raise(ErrorKind::invalid_argument, "tabulated weight needs >= 2 knots");
  for (size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i].first > knots[i - 1].first))
      raise(ErrorKind::invalid_argument, "tabulated knots must be increasing");
  DiscountMeasure w;
  w.kind = Kind::tabulated;
  w.table = std::move(knots);
  return w;
}

double DiscountMeasure::horizon() const {
  if (kind == Kind::tabulated) return table.back().first;
  return -std::log(1e-12) / rate;
}

double DiscountMeasure::integrate(const std::function<double(double)>& g) const {
  if (kind == Kind::tabulated) {
    double sum = 0.0;
    for (size_t i = 1; i < table.size(); ++i) {
      const auto& [s0, w0] = table[i - 1];
      const auto& [s1, w1] = table[i];
      sum += 0.5 * (s1 - s0) * (w0 * g(s0) + w1 * g(s1));
    }
    return sum;
  }
  auto weighted = [this, &g](double s) {
    return rate * std::exp(-rate * s) * g(s);
  };
  num::QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  return num::integrate_finite(weighted, 0.0, horizon(), spec);
}

double discounted_bound(const std::function<CgfHandle(double)>& cgf_family,
                        const std::function<double(double)>& eta_family,
                        const DiscountMeasure& weight, Side side,
                        DiscountMode mode) {
  const double sgn = sign_of(side);
  if (mode == DiscountMode::inside) {
    auto per_s = [&](double s) {
      const BoundResult b = info_bound(cgf_family(s), eta_family(s), side);
      if (b.status == BoundStatus::infinite)
        raise(ErrorKind::non_integrable, "per-s bound infinite inside weight");
      return b.value;
    };
    double value = weight.integrate(per_s);
    if (weight.kind == DiscountMeasure::Kind::exponential) {
      // Conservative allowance for the truncated exponential tail.
      const double s_max = weight.horizon();
      const double edge = std::abs(per_s(s_max));
      const double tail = 2.0 * edge * std::exp(-weight.rate * s_max);
      value += (side == Side::upper) ? tail : -tail;
    }
    return value;
  }

  // outside: single optimization of the weight-averaged CGF plus D/c.
  const double budget = weight.integrate(eta_family);
  auto averaged_cgf = [&](double z) {
    try {
      return weight.integrate([&](double s) {
        const double v = cgf_family(s).eval(z);
        if (!std::isfinite(v))
          raise(ErrorKind::non_finite, "CGF infinite inside weight");
        return v;
      });
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::non_finite) return kInf;
      throw;
    }
  };
  auto objective = [&](double m) {
    return m * averaged_cgf(sgn / m) + budget * m;
  };
  const ReciprocalSolve r = solve_reciprocal(objective, 0.0);
  if (r.status == BoundStatus::infinite)
    raise(ErrorKind::non_integrable, "averaged CGF infinite for all c");
  return (side == Side::upper) ? r.value : -r.value;
}

}  // namespace pathuq::bounds

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pathuq/bounds.hpp"
#include "pathuq/errors.hpp"
#include "pathuq/gaussian_quadratic.hpp"
#include "pathuq/hitting_law.hpp"
#include "pathuq/queue_cgf.hpp"

using namespace pathuq;
using bounds::BoundStatus;
using bounds::CgfHandle;
using bounds::Side;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent oracle: dense scan of inf over c, coarse log pass then a fine
// linear pass around the incumbent.
double grid_scan_inf(const std::function<double(double)>& f, double c_lo = 1e-6,
                     double c_hi = 1e6) {
  double best = kInf, c_best = 1.0;
  const int n_log = 2000;
  for (int i = 0; i <= n_log; ++i) {
    const double c = c_lo * std::pow(c_hi / c_lo, static_cast<double>(i) / n_log);
    const double v = f(c);
    if (v < best) best = v, c_best = c;
  }
  const double lo = c_best / 1.5, hi = c_best * 1.5;
  const int n_lin = 10000;
  for (int i = 0; i <= n_lin; ++i) {
    const double c = lo + (hi - lo) * i / n_lin;
    const double v = f(c);
    if (v < best) best = v;
  }
  return best;
}

// Random CGF families for the property suites.
struct RandomCgf {
  CgfHandle handle;
  std::string family;
};

RandomCgf random_cgf(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::uniform_int_distribution<int> pick(0, 2);
  switch (pick(rng)) {
    case 0: {
      cgf::QueueCgfLimit q{u(rng), u(rng)};
      return {cgf::queue_cgf_handle(q), "queue"};
    }
    case 1: {
      cgf::DriftedBMHittingLaw law(u(rng), u(rng));
      // Centered variant so zero-budget collapse applies.
      CgfHandle h = cgf::hitting_cgf_handle(law);
      const double mean = law.mean();
      CgfHandle centered;
      centered.c_max = h.c_max;
      centered.centered = true;
      centered.eval = [h, mean](double c) { return h.eval(c) - c * mean; };
      return {centered, "hitting"};
    }
    default: {
      Eigen::MatrixXd A = Eigen::MatrixXd::Random(2, 2);
      Eigen::MatrixXd sigma =
          A * A.transpose() + 0.3 * Eigen::MatrixXd::Identity(2, 2);
      Eigen::MatrixXd B = Eigen::MatrixXd::Random(2, 2);
      Eigen::MatrixXd cost =
          B * B.transpose() + 0.3 * Eigen::MatrixXd::Identity(2, 2);
      cgf::GaussianQuadraticForm form(sigma, cost);
      return {form.handle(/*centered=*/true), "gaussian"};
    }
  }
}

}  // namespace

TEST_CASE("info_bound: queue CGF closed forms at eta = 0.25") {
  cgf::QueueCgfLimit q{1.0, 1.0};
  const CgfHandle h = cgf::queue_cgf_handle(q);
  const double eta = 0.25;
  // (2 sqrt(H/alpha) + H/alpha) alpha/rho and the H < alpha lower branch.
  const auto up = bounds::info_bound(h, eta, Side::upper);
  CHECK(up.value == doctest::Approx(1.25).epsilon(1e-8));
  const auto lo = bounds::info_bound(h, eta, Side::lower);
  CHECK(lo.value == doctest::Approx(-0.75).epsilon(1e-8));
  CHECK(lo.value <= up.value);
}

TEST_CASE("info_bound: zero budget collapses a centered bound to zero") {
  cgf::QueueCgfLimit q{1.3, 0.9};
  const CgfHandle h = cgf::queue_cgf_handle(q);
  const auto up = bounds::info_bound(h, 0.0, Side::upper);
  const auto lo = bounds::info_bound(h, 0.0, Side::lower);
  CHECK(up.status == BoundStatus::boundary_limit);
  CHECK(std::abs(up.value) < 1e-12);
  CHECK(std::abs(lo.value) < 1e-12);
}

TEST_CASE("info_bound: CGF infinite everywhere yields the vacuous bound") {
  CgfHandle h;
  h.c_max = 1.0;
  h.eval = [](double) { return kInf; };
  const auto up = bounds::info_bound(h, 0.1, Side::upper);
  CHECK(up.status == BoundStatus::infinite);
  CHECK(up.value == kInf);
}

TEST_CASE("tilted_bound: zero penalty degenerates to info_bound with eta = 0") {
  bounds::TiltedExpectation t;
  t.support = {{0.0, 0.35}, {1.0, 0.4}, {2.5, 0.25}};
  t.payoff = [](double x) { return x; };
  const auto tilted_up = bounds::tilted_bound(t, Side::upper);
  const auto tilted_lo = bounds::tilted_bound(t, Side::lower);

  CgfHandle h;
  h.arg_floor = 1e-5;
  h.eval = [&t](double z) { return t.log_tilted(z); };
  const auto info_up = bounds::info_bound(h, 0.0, Side::upper);
  const auto info_lo = bounds::info_bound(h, 0.0, Side::lower);
  CHECK(tilted_up.value == doctest::Approx(info_up.value).epsilon(1e-10));
  CHECK(tilted_lo.value == doctest::Approx(info_lo.value).epsilon(1e-10));
}

TEST_CASE("tilted_bound: stopped-time payoff matches the budget-form bound") {
  // Payoff tau ^ n with penalty K (tau ^ n) equals the affine-budget bound
  // built from the numeric CGF of tau ^ n.
  const cgf::DriftedBMHittingLaw law(2.0, 1.0);
  const double K = 0.02, horizon = 50.0;

  bounds::TiltedExpectation t;
  t.log_density = [&law](double s) { return law.log_density(s); };
  t.payoff = [horizon](double s) { return std::min(s, horizon); };
  t.penalty = [K, horizon](double s) { return K * std::min(s, horizon); };
  const auto up_tilted = bounds::tilted_bound(t, Side::upper);
  const auto lo_tilted = bounds::tilted_bound(t, Side::lower);

  CgfHandle capped;
  capped.arg_floor = 1e-5;
  capped.eval = [&law, horizon](double z) {
    return num::log_integral_semi_infinite([&law, horizon, z](double s) {
      return law.log_density(s) + z * std::min(s, horizon);
    });
  };
  const auto iv = bounds::stopping_time_mean_bound(
      capped, bounds::RelEntBudget::affine(0.0, K));
  CHECK(up_tilted.value == doctest::Approx(iv.upper.value).epsilon(1e-8));
  CHECK(lo_tilted.value == doctest::Approx(iv.lower.value).epsilon(1e-8));
}

TEST_CASE("event_prob_bound: totals and edge cases") {
  SUBCASE("zero budget is the point interval") {
    const auto r = bounds::event_prob_bound(0.5, 0.0);
    CHECK(r.lower == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.upper == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("certain events stay certain under any budget") {
    const auto r = bounds::event_prob_bound(1.0, 3.7);
    CHECK(r.lower == doctest::Approx(1.0));
    CHECK(r.upper == doctest::Approx(1.0));
    const auto z = bounds::event_prob_bound(0.0, 3.7);
    CHECK(z.lower == doctest::Approx(0.0));
    CHECK(z.upper == doctest::Approx(0.0));
  }
  SUBCASE("optimizer agrees with a dense c-grid scan") {
    const double p = 0.5, eta = 0.125;
    const auto r = bounds::event_prob_bound(p, eta);
    auto bern = [p](double z) {
      return std::log(p * std::exp(z * (1.0 - p)) +
                      (1.0 - p) * std::exp(-z * p));
    };
    const double scan_up =
        grid_scan_inf([&](double c) { return bern(c) / c + eta / c; });
    const double scan_lo =
        grid_scan_inf([&](double c) { return bern(-c) / c + eta / c; });
    CHECK(r.upper == doctest::Approx(p + scan_up).epsilon(1e-6));
    CHECK(r.lower == doctest::Approx(p - scan_lo).epsilon(1e-6));
  }
}

TEST_CASE("rel_ent_bootstrap: degenerate budgets") {
  SUBCASE("zero G") {
    CgfHandle h;
    h.eval = [](double) { return 0.0; };
    CHECK(bounds::rel_ent_bootstrap(h) == doctest::Approx(0.0));
  }
  SUBCASE("deterministic G = g0 recovers g0 as a boundary limit") {
    const double g0 = 0.37;
    CgfHandle h;
    h.eval = [g0](double lam) { return lam * g0; };
    CHECK(bounds::rel_ent_bootstrap(h) == doctest::Approx(g0).epsilon(1e-9));
  }
  SUBCASE("no finite lambda > 1 yields +inf") {
    CgfHandle h;
    h.c_max = 0.8;
    h.eval = [](double lam) { return lam < 0.8 ? lam : kInf; };
    CHECK(bounds::rel_ent_bootstrap(h) == kInf);
  }
}

TEST_CASE("stopping_time_mean_bound: drifted-BM closed forms") {
  const cgf::DriftedBMHittingLaw law(2.0, 1.0);
  const CgfHandle h = cgf::hitting_cgf_handle(law);

  SUBCASE("alpha = 0.2 reproduces a/(mu -+ alpha) with the stated optimizers") {
    const auto iv = bounds::stopping_time_mean_bound(
        h, bounds::RelEntBudget::affine(0.0, 0.02));
    CHECK(iv.lower.value == doctest::Approx(5.0 / 3.0).epsilon(1e-9));
    CHECK(iv.upper.value == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(iv.lower.optimizer == doctest::Approx(0.22).epsilon(1e-4));
    CHECK(iv.upper.optimizer == doctest::Approx(0.18).epsilon(1e-4));
  }
  SUBCASE("zero perturbation collapses both sides to the baseline mean") {
    const auto iv = bounds::stopping_time_mean_bound(
        h, bounds::RelEntBudget::affine(0.0, 0.0));
    CHECK(iv.lower.value == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(iv.upper.value == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(iv.lower.status == BoundStatus::boundary_limit);
    CHECK(iv.upper.status == BoundStatus::boundary_limit);
  }
  SUBCASE("scalar offset widens the interval; grid-scan agreement") {
    const auto base = bounds::stopping_time_mean_bound(
        h, bounds::RelEntBudget::affine(0.0, 0.02));
    const auto wide = bounds::stopping_time_mean_bound(
        h, bounds::RelEntBudget::affine(0.1, 0.02));
    CHECK(wide.lower.value < base.lower.value);
    CHECK(wide.upper.value > base.upper.value);
    const double scan_up = grid_scan_inf(
        [&](double m) { return (hitting_cgf(law, 0.02 + m) + 0.1) / m; }, 1e-6,
        0.5 - 0.02 - 1e-9);
    CHECK(wide.upper.value == doctest::Approx(scan_up).epsilon(1e-6));
    const double scan_lo = grid_scan_inf(
        [&](double c) { return (hitting_cgf(law, -c) + 0.1) / (c + 0.02); });
    CHECK(wide.lower.value == doctest::Approx(-scan_lo).epsilon(1e-6));
  }
  SUBCASE("perturbation too large for the CGF domain is flagged infinite") {
    // K >= mu^2/2 leaves no lambda in (K, c_max).
    const auto iv = bounds::stopping_time_mean_bound(
        h, bounds::RelEntBudget::affine(0.0, 0.6));
    CHECK(iv.upper.status == BoundStatus::infinite);
    CHECK(iv.upper.value == kInf);
    CHECK(std::isfinite(iv.lower.value));
  }
}

TEST_CASE("discounted_bound: zero budgets and inside/outside ordering") {
  cgf::QueueCgfLimit q{1.0, 1.0};
  auto family = [&q](double) { return cgf::queue_cgf_handle(q); };
  const auto weight = bounds::DiscountMeasure::exponential(0.5);

  SUBCASE("centered family with zero budget gives zero both modes") {
    auto zero = [](double) { return 0.0; };
    for (auto mode : {bounds::DiscountMode::inside, bounds::DiscountMode::outside}) {
      const double up = bounds::discounted_bound(family, zero, weight, Side::upper, mode);
      const double lo = bounds::discounted_bound(family, zero, weight, Side::lower, mode);
      CHECK(std::abs(up) < 1e-9);
      CHECK(std::abs(lo) < 1e-9);
    }
  }
  SUBCASE("tabulated weights integrate against the knot density") {
    // Triangle density on [0, 2] with unit mass.
    auto tri = bounds::DiscountMeasure::tabulated(
        {{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}});
    CHECK(tri.integrate([](double) { return 1.0; }) == doctest::Approx(1.0));
    auto zero = [](double) { return 0.0; };
    for (auto side : {Side::upper, Side::lower}) {
      const double v = bounds::discounted_bound(family, zero, tri, side,
                                                bounds::DiscountMode::inside);
      CHECK(std::abs(v) < 1e-9);
    }
    auto eta = [](double s) { return 0.3 * s; };
    const double in_up = bounds::discounted_bound(family, eta, tri, Side::upper,
                                                  bounds::DiscountMode::inside);
    const double out_up = bounds::discounted_bound(
        family, eta, tri, Side::upper, bounds::DiscountMode::outside);
    CHECK(in_up <= out_up + 1e-9);
    CHECK(in_up > 0.0);
  }
  SUBCASE("pointwise infimum dominates the pulled-out infimum") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 1.5);
    for (int rep = 0; rep < 5; ++rep) {
      const double k = u(rng), lam = u(rng);
      auto eta = [k](double s) { return k * s; };
      auto fam = [&](double s) {
        cgf::QueueCgfLimit qs{1.0 + 0.2 * std::sin(s), 1.0};
        return cgf::queue_cgf_handle(qs);
      };
      const auto w = bounds::DiscountMeasure::exponential(lam);
      const double in_up = bounds::discounted_bound(fam, eta, w, Side::upper,
                                                    bounds::DiscountMode::inside);
      const double out_up = bounds::discounted_bound(fam, eta, w, Side::upper,
                                                     bounds::DiscountMode::outside);
      CHECK(in_up <= out_up + 1e-7);
      const double in_lo = bounds::discounted_bound(fam, eta, w, Side::lower,
                                                    bounds::DiscountMode::inside);
      const double out_lo = bounds::discounted_bound(fam, eta, w, Side::lower,
                                                     bounds::DiscountMode::outside);
      CHECK(in_lo >= out_lo - 1e-7);
    }
  }
}

TEST_CASE("property: three-point quasiconvexity of bound objectives") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int rep = 0; rep < 400; ++rep) {
    const auto [h, family] = random_cgf(rng);
    const double eta = 0.5 * u01(rng);
    auto obj = [&](double c) { return (h.eval(c) + eta) / c; };
    const double c_hi = std::isfinite(h.c_max) ? h.c_max : 10.0;
    double c0 = c_hi * u01(rng), c1 = c_hi * u01(rng), c2 = c_hi * u01(rng);
    if (c0 > c1) std::swap(c0, c1);
    if (c1 > c2) std::swap(c1, c2);
    if (c0 > c1) std::swap(c0, c1);
    if (c0 <= 0.0 || c0 == c1 || c1 == c2) continue;
    const double f1 = obj(c1);
    if (!std::isfinite(f1)) continue;
    CHECK(f1 <= std::max(obj(c0), obj(c2)) + 1e-9);
  }
}

TEST_CASE("property: interval validity, budget monotonicity, zero collapse") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int rep = 0; rep < 300; ++rep) {
    const auto [h, family] = random_cgf(rng);
    const double eta1 = u01(rng), eta2 = eta1 + u01(rng);
    const auto up1 = bounds::info_bound(h, eta1, Side::upper);
    const auto lo1 = bounds::info_bound(h, eta1, Side::lower);
    const auto up2 = bounds::info_bound(h, eta2, Side::upper);
    const auto lo2 = bounds::info_bound(h, eta2, Side::lower);
    CHECK(lo1.value <= up1.value);
    CHECK(up1.value <= up2.value + 1e-10);
    CHECK(lo1.value >= lo2.value - 1e-10);
    if (h.centered) {
      const auto up0 = bounds::info_bound(h, 0.0, Side::upper);
      const auto lo0 = bounds::info_bound(h, 0.0, Side::lower);
      CHECK(std::abs(up0.value) < 1e-8);
      CHECK(std::abs(lo0.value) < 1e-8);
    }
  }
}

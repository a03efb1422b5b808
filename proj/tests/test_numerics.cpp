#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pathuq/errors.hpp"
#include "pathuq/hitting_law.hpp"
#include "pathuq/minimize.hpp"
#include "pathuq/quadrature.hpp"

using namespace pathuq;
using num::ScalarObjective;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("minimize_scalar: stopped-mean lower objective has the closed-form minimizer") {
  // (c + K)^{-1} (2 - 2 sqrt(1 + 2c)) with K = 0.02; minimizer K + sqrt(2K),
  // minimum value -5/3 (the negated bound).
  ScalarObjective obj;
  obj.eval = [](double c) {
    return (2.0 - 2.0 * std::sqrt(1.0 + 2.0 * c)) / (c + 0.02);
  };
  const auto r = num::minimize_scalar(obj);
  CHECK(r.status == num::MinStatus::interior);
  CHECK(r.x == doctest::Approx(0.22).epsilon(1e-6));
  CHECK(r.f == doctest::Approx(-5.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("minimize_scalar: monotone objective reports the left boundary limit") {
  ScalarObjective obj;
  obj.eval = [](double c) { return c * c; };
  const auto r = num::minimize_scalar(obj);
  CHECK(r.status == num::MinStatus::boundary_lo);
  CHECK(r.x < 1e-18);
  CHECK(r.f < 1e-30);
}

TEST_CASE("minimize_scalar: stopped-mean upper objective on a bounded domain") {
  // (lambda - 0.02)^{-1} (2 - 2 sqrt(1 - 2 lambda)) on (0.02, 0.5), solved in
  // the shifted variable m = lambda - 0.02 on (0, 0.48).
  ScalarObjective obj;
  obj.domain_hi = 0.48;
  obj.eval = [](double m) {
    const double lam = m + 0.02;
    const double disc = 1.0 - 2.0 * lam;
    if (disc <= 0.0) return kInf;
    return (2.0 - 2.0 * std::sqrt(disc)) / m;
  };
  const auto r = num::minimize_scalar(obj);
  CHECK(r.status == num::MinStatus::interior);
  CHECK(r.x + 0.02 == doctest::Approx(0.18).epsilon(1e-6));
  CHECK(r.f == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("minimize_scalar: objective infinite everywhere reports empty domain") {
  ScalarObjective obj;
  obj.eval = [](double) { return kInf; };
  CHECK_THROWS_AS(num::minimize_scalar(obj), Error);
}

TEST_CASE("minimize_scalar: NaN surfaces as non_finite") {
  ScalarObjective obj;
  obj.eval = [](double c) { return c > 0.9 ? std::nan("") : 1.0 / c; };
  CHECK_THROWS_AS(num::minimize_scalar(obj), Error);
}

TEST_CASE("minimize_scalar: bracket never leaves the finite region") {
  // +inf on a right neighborhood of the domain; minimum near the edge.
  ScalarObjective obj;
  obj.domain_hi = 1.0;
  obj.eval = [](double c) {
    if (c >= 0.8) return kInf;
    return 1.0 / c + 1.0 / (0.8 - c);
  };
  const auto r = num::minimize_scalar(obj);
  CHECK(r.status == num::MinStatus::interior);
  CHECK(r.x == doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("minimize_scalar: descent toward an infinite cliff stays finite") {
  // Strictly decreasing up to a +inf band at the right edge; the walk must
  // stop at the cliff instead of carrying the infinity out.
  ScalarObjective obj;
  obj.domain_hi = 1.0;
  obj.eval = [](double c) {
    if (c >= 0.9) return kInf;
    return 1.0 / (c + 0.1);
  };
  const auto r = num::minimize_scalar(obj);
  CHECK(std::isfinite(r.f));
  CHECK(r.x < 0.9);
  CHECK(r.f == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("integrate_semi_infinite: exponential density has mass one") {
  const double v = num::integrate_semi_infinite([](double u) { return std::exp(-u); });
  CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("integrate_semi_infinite: hitting density mass complements the atom") {
  using cgf::DriftedBMHittingLaw;
  SUBCASE("same signs: no atom") {
    DriftedBMHittingLaw law(2.0, 1.0);
    CHECK(law.atom() == doctest::Approx(0.0));
    const double mass =
        num::integrate_semi_infinite([&](double t) { return law.density(t); });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("opposite signs: defective law") {
    DriftedBMHittingLaw law(2.0, -1.0);
    CHECK(law.atom() == doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-12));
    const double mass =
        num::integrate_semi_infinite([&](double t) { return law.density(t); });
    CHECK(mass == doctest::Approx(std::exp(-4.0)).epsilon(1e-8));
  }
  SUBCASE("mass + atom = 1 over a sign grid") {
    for (double a : {0.5, 1.0, 2.0, -1.5}) {
      for (double mu : {0.8, 2.0, -0.5}) {
        DriftedBMHittingLaw law(a, mu);
        const double mass = num::integrate_semi_infinite(
            [&](double t) { return law.density(t); });
        CHECK(mass + law.atom() == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("gauss_hermite_nd: normalization, second moments, independence") {
  Eigen::VectorXd mean2 = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd half = 0.5 * Eigen::MatrixXd::Identity(2, 2);

  CHECK(num::gauss_hermite_nd([](const Eigen::VectorXd&) { return 1.0; }, mean2,
                              half, 16) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(num::gauss_hermite_nd(
            [](const Eigen::VectorXd& x) { return x.squaredNorm(); }, mean2,
            half, 16) == doctest::Approx(1.0).epsilon(1e-13));
  Eigen::MatrixXd diag(2, 2);
  diag << 0.7, 0.0, 0.0, 2.3;
  CHECK(num::gauss_hermite_nd(
            [](const Eigen::VectorXd& x) { return x(0) * x(1); }, mean2, diag,
            24) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("gauss_hermite_nd: exact on polynomials of degree < 2*order") {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const int order = 6;
  // 1-D: random polynomial of degree 2*order-1 against N(m, v); oracle from
  // central moments of the normal distribution.
  for (int rep = 0; rep < 25; ++rep) {
    const double m = coef(rng), sd = 0.4 + std::abs(coef(rng));
    std::vector<double> a(2 * order);
    for (auto& c : a) c = coef(rng);
    // E[(x-m)^k] for N(m, sd^2): 0 odd, sd^k (k-1)!! even.
    std::vector<double> central(2 * order, 0.0);
    central[0] = 1.0;
    for (int k = 2; k < 2 * order; k += 2)
      central[k] = central[k - 2] * sd * sd * (k - 1);
    // Expand the polynomial around m via binomials.
    double expected = 0.0;
    for (int k = 0; k < 2 * order; ++k) {
      double binom = 1.0;
      for (int j = 0; j <= k; ++j) {
        expected += a[k] * binom * std::pow(m, k - j) * central[j];
        binom = binom * (k - j) / (j + 1);
      }
    }
    Eigen::VectorXd mean(1);
    mean << m;
    Eigen::MatrixXd cov(1, 1);
    cov << sd * sd;
    const double got = num::gauss_hermite_nd(
        [&](const Eigen::VectorXd& x) {
          double acc = 0.0, p = 1.0;
          for (int k = 0; k < 2 * order; ++k) {
            acc += a[k] * p;
            p *= x(0);
          }
          return acc;
        },
        mean, cov, order);
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("gauss_hermite_nd: rejects non-SPD covariance") {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS_AS(num::gauss_hermite_nd(
                      [](const Eigen::VectorXd&) { return 1.0; }, mean, bad, 8),
                  Error);
}

TEST_CASE("gauss_legendre_rule integrates polynomials exactly") {
  const auto& rule = num::gauss_legendre_rule(8);
  double sum = 0.0, sum_x2 = 0.0;
  for (int i = 0; i < 8; ++i) {
    sum += rule.weights[i];
    sum_x2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
  }
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sum_x2 == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("log_integral_semi_infinite matches direct evaluation with large shifts") {
  // integral of exp(c - t) dt = exp(c); exercised at c large enough that the
  // unshifted integrand would overflow.
  const double c = 600.0;
  const double v = num::log_integral_semi_infinite(
      [c](double t) { return c - t; });
  CHECK(v == doctest::Approx(c).epsilon(1e-10));
  // Atom handling: mass m at value log(2) adds m*2 to the integral.
  const double with_atom = num::log_integral_semi_infinite(
      [](double t) { return -t; }, {{0.5, std::log(2.0)}});
  CHECK(with_atom == doctest::Approx(std::log(2.0)).epsilon(1e-10));
}

#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace pathuq::num {

struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-10;
  int max_subdivisions = 50;  // adaptive recursion depth
};

// Integral of f over (0, inf) via the rational substitution t = u/(1-u)
// followed by adaptive Simpson on (0, 1).  Endpoint evaluations that come
// out non-finite are treated as vanishing limits, which is the behaviour the
// transformed integrand of an integrable density exhibits at both ends.
// Throws Error{max_subdivisions} or Error{non_finite} (interior NaN).
double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec = {});

// Adaptive Simpson on a finite interval, same tolerance semantics.
double integrate_finite(const std::function<double(double)>& f, double a,
                        double b, const QuadratureSpec& spec = {});

// Gauss-Hermite nodes/weights for the weight exp(-x^2); sum(w) = sqrt(pi).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_hermite_rule(int order);

// Gauss-Legendre rule on [-1, 1].
const GaussRule& gauss_legendre_rule(int order);

// E[g(X)] for X ~ N(mean, cov) by tensor-product Gauss-Hermite, d in {1, 2}.
// Exact for polynomials of per-axis degree <= 2*order - 1.
// Throws Error{not_spd} when cov has no Cholesky factor.
double gauss_hermite_nd(const std::function<double(const Eigen::VectorXd&)>& g,
                        const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                        int order);

// log of ( \int_0^inf exp(log_f(t)) dt + sum_i atom_mass_i * exp(atom_log_i) ),
// computed by factoring out the largest exponent seen on a probe grid so the
// quadrature works with exp(log_f - shift).  Used for tilted expectations
// whose exponents grow linearly in the tilt.
double log_integral_semi_infinite(
    const std::function<double(double)>& log_f,
    const std::vector<std::pair<double, double>>& atoms = {},  // (mass, log value)
    const QuadratureSpec& spec = {});

}  // namespace pathuq::num

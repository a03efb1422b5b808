#include "pathuq/lq_control.hpp"

#include <cmath>
#include <map>

#include "pathuq/bounds.hpp"
#include "pathuq/errors.hpp"
#include "pathuq/gaussian_quadratic.hpp"

namespace pathuq::lqg {

namespace {

double max_real_eig(const Eigen::MatrixXd& A) {
  return Eigen::EigenSolver<Eigen::MatrixXd>(A, false)
      .eigenvalues()
      .real()
      .maxCoeff();
}

// Solve A^T Y + Y A = -W for symmetric W via the Kronecker linear system.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& W) {
  const auto n = A.rows();
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(n * n, n * n);
  // vec(A^T Y) = (I (x) A^T) vec(Y); vec(Y A) = (A^T (x) I) vec(Y).
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        big(i + n * j, k + n * j) += A(k, i);  // (A^T)_{ik} Y_{kj}
        big(i + n * j, i + n * k) += A(k, j);  // Y_{ik} A_{kj}
      }
  Eigen::VectorXd rhs(n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) rhs(i + n * j) = -W(i, j);
  const Eigen::VectorXd y = big.partialPivLu().solve(rhs);
  Eigen::MatrixXd Y(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) Y(i, j) = y(i + n * j);
  return 0.5 * (Y + Y.transpose());
}

void validate(const LqProblem& prob) {
  const auto n = prob.drift.rows();
  const auto m = prob.control.cols();
  if (prob.drift.cols() != n || prob.control.rows() != n ||
      prob.state_cost.rows() != n || prob.state_cost.cols() != n ||
      prob.control_cost.rows() != m || prob.control_cost.cols() != m ||
      prob.init_cov.rows() != n || prob.init_cov.cols() != n ||
      prob.noise.rows() != n || prob.noise.cols() != n)
    raise(ErrorKind::invalid_argument, "inconsistent dimensions");
  if (!(prob.discount > 0.0))
    raise(ErrorKind::invalid_argument, "discount rate must be positive");
}

Eigen::MatrixXd rk4_march(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W,
                          Eigen::MatrixXd sigma, double from, double to,
                          double h_max) {
  auto deriv = [&](const Eigen::MatrixXd& S) {
    return (A * S + S * A.transpose() + W).eval();
  };
  double t = from;
  while (t < to - 1e-15 * std::max(1.0, to)) {
    const double h = std::min(h_max, to - t);
    const Eigen::MatrixXd k1 = deriv(sigma);
    const Eigen::MatrixXd k2 = deriv(sigma + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = deriv(sigma + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = deriv(sigma + h * k3);
    sigma += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return sigma;
}

double micro_step(const Eigen::MatrixXd& A) {
  const double scale = std::max(1.0, A.norm());
  return 0.02 / scale;
}

}  // namespace

RiccatiSolution solve_riccati(const LqProblem& prob) {
  validate(prob);
  const auto n = prob.drift.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd B_l = prob.drift - 0.5 * prob.discount * I;
  const Eigen::MatrixXd& D = prob.control;
  const Eigen::MatrixXd R_inv_Dt =
      prob.control_cost.llt().solve(D.transpose());

  // Initial stabilizing gain.
  Eigen::MatrixXd K;
  if (max_real_eig(B_l) < -1e-12) {
    K = Eigen::MatrixXd::Zero(D.cols(), n);
  } else {
    // Eigenvalue shifting: (B_l + beta I) P + P (B_l + beta I)^T = 2 D D^T
    // has P > 0 for controllable (B_l, D); K0 = -D^T P^{-1} stabilizes B_l.
    const double beta = 1.1 * B_l.norm() + 0.5;
    const Eigen::MatrixXd shifted = -(B_l + beta * I).transpose();
    const Eigen::MatrixXd P =
        solve_lyapunov(shifted, (2.0 * D * D.transpose()).eval());
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(P);
    if (!lu.isInvertible())
      raise(ErrorKind::not_stabilizable,
            "stabilizing initialization failed; (B_l, D) not controllable");
    K = -D.transpose() * lu.inverse();
    if (max_real_eig(B_l + D * K) >= 0.0)
      raise(ErrorKind::not_stabilizable, "shifted gain does not stabilize");
  }

  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, n);
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const Eigen::MatrixXd A_cl = B_l + D * K;
    const Eigen::MatrixXd W =
        prob.state_cost + K.transpose() * prob.control_cost * K;
    const Eigen::MatrixXd Y_next = solve_lyapunov(A_cl, W);
    const double diff = (Y_next - Y).norm();
    Y = Y_next;
    K = -R_inv_Dt * Y;
    if (diff <= 1e-13 * std::max(1.0, Y.norm())) {
      converged = true;
      break;
    }
  }
  if (!converged)
    raise(ErrorKind::no_convergence, "Newton-Kleinman did not converge");

  RiccatiSolution sol;
  sol.value = 0.5 * (Y + Y.transpose());
  sol.gain = -R_inv_Dt * sol.value;
  sol.closed_loop = prob.drift + D * sol.gain;
  const Eigen::MatrixXd gram = D * R_inv_Dt;  // D R^{-1} D^T
  const Eigen::MatrixXd residual_mat = B_l.transpose() * sol.value +
                                       sol.value * B_l + prob.state_cost -
                                       sol.value * gram * sol.value;
  sol.residual = residual_mat.norm() / std::max(1.0, prob.state_cost.norm());
  if (max_real_eig(B_l + D * sol.gain) >= 0.0)
    raise(ErrorKind::not_stabilizable, "solution is not stabilizing");
  return sol;
}

Eigen::MatrixXd covariance_at(const LqProblem& prob,
                              const Eigen::MatrixXd& closed_loop, double t) {
  validate(prob);
  if (t < 0.0) raise(ErrorKind::invalid_argument, "time must be >= 0");
  const Eigen::MatrixXd W = prob.noise * prob.noise.transpose();
  // Step-doubling control: halve the micro-step until two full integrations
  // agree.
  double h = micro_step(closed_loop);
  Eigen::MatrixXd coarse = rk4_march(closed_loop, W, prob.init_cov, 0.0, t, h);
  for (int it = 0; it < 12; ++it) {
    h *= 0.5;
    const Eigen::MatrixXd fine =
        rk4_march(closed_loop, W, prob.init_cov, 0.0, t, h);
    if ((fine - coarse).norm() <= 1e-11 * std::max(1.0, fine.norm()))
      return fine;
    coarse = fine;
  }
  return coarse;
}

namespace {

// Marched covariance trajectory with memoized knots so the weighted-time
// quadrature can query s out of order without re-integrating from 0.
class CovariancePath {
 public:
  CovariancePath(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W,
                 const Eigen::MatrixXd& sigma0)
      : A_(A), W_(W), h_(0.25 * micro_step(A)) {
    knots_[0.0] = sigma0;
  }

  Eigen::MatrixXd at(double s) {
    auto it = knots_.upper_bound(s);
    --it;  // greatest knot <= s (0 always present)
    if (it->first == s) return it->second;
    Eigen::MatrixXd sigma = rk4_march(A_, W_, it->second, it->first, s, h_);
    knots_.emplace(s, sigma);
    return sigma;
  }

 private:
  Eigen::MatrixXd A_, W_;
  double h_;
  std::map<double, Eigen::MatrixXd> knots_;
};

}  // namespace

CostInterval control_cost_bound(const LqProblem& prob, double drift_sup) {
  if (!(drift_sup >= 0.0))
    raise(ErrorKind::invalid_argument, "perturbation bound must be >= 0");
  const RiccatiSolution ric = solve_riccati(prob);
  const Eigen::MatrixXd closed_cost =
      prob.state_cost + ric.gain.transpose() * prob.control_cost * ric.gain;
  const Eigen::MatrixXd W = prob.noise * prob.noise.transpose();

  CovariancePath path(ric.closed_loop, W, prob.init_cov);
  auto cgf_family = [&](double s) {
    return cgf::GaussianQuadraticForm(path.at(s), closed_cost).handle(false);
  };
  auto eta_family = [&](double s) {
    return 0.5 * drift_sup * drift_sup * s;
  };
  const auto weight = bounds::DiscountMeasure::exponential(prob.discount);

  CostInterval out;
  out.upper = bounds::discounted_bound(cgf_family, eta_family, weight,
                                       bounds::Side::upper,
                                       bounds::DiscountMode::inside);
  out.lower = bounds::discounted_bound(cgf_family, eta_family, weight,
                                       bounds::Side::lower,
                                       bounds::DiscountMode::inside);
  out.baseline = weight.integrate([&](double s) {
    return 0.5 * (path.at(s) * closed_cost).trace();
  });
  return out;
}

}  // namespace pathuq::lqg

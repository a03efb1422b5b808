#pragma once
#include <Eigen/Dense>

namespace pathuq::lqg {

// Discounted linear-quadratic regulator data:
//   dX = (B X + D u) dt + noise dW,  cost int 1/2 (X^T Q X + u^T R u) e^{-lambda s},
// with X_0 ~ N(0, init_cov).
struct LqProblem {
  Eigen::MatrixXd drift;         // B, n x n
  Eigen::MatrixXd control;       // D, n x m
  Eigen::MatrixXd state_cost;    // Q, SPD
  Eigen::MatrixXd control_cost;  // R, SPD
  double discount = 1.0;         // lambda > 0
  Eigen::MatrixXd init_cov;      // Sigma_0, PSD
  Eigen::MatrixXd noise;         // sigma, n x n
};

struct RiccatiSolution {
  Eigen::MatrixXd value;        // Y, SPD
  Eigen::MatrixXd gain;         // K = -R^{-1} D^T Y
  Eigen::MatrixXd closed_loop;  // B + D K
  double residual = 0.0;        // relative residual of the Riccati equation
};

// Stabilizing solution of B_l^T Y + Y B_l + Q - Y D R^{-1} D^T Y = 0 with
// B_l = B - (lambda/2) I, by Newton-Kleinman iteration on Lyapunov solves;
// the initial stabilizing gain comes from an eigenvalue-shifted Lyapunov
// equation when B_l itself is unstable.
// Throws Error{not_stabilizable} or Error{no_convergence}.
RiccatiSolution solve_riccati(const LqProblem& prob);

// Solution of Sigma' = A Sigma + Sigma A^T + noise noise^T, Sigma(0) =
// init_cov, by RK4 with step-doubling control.
Eigen::MatrixXd covariance_at(const LqProblem& prob,
                              const Eigen::MatrixXd& closed_loop, double t);

struct CostInterval {
  double lower = 0.0;
  double upper = 0.0;
  double baseline = 0.0;  // exact discounted cost under the linear model
};

// Interval containing the discounted quadratic cost of the closed-loop system
// under every drift perturbation sigma*beta with ||beta|| <= drift_sup.
CostInterval control_cost_bound(const LqProblem& prob, double drift_sup);

}  // namespace pathuq::lqg

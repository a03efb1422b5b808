#pragma once
#include <Eigen/Dense>

#include "pathuq/cgf.hpp"

namespace pathuq::cgf {

// CGF of f = 1/2 x^T C x + d^T x under x ~ N(0, Sigma):
//   Lambda(c) = -1/2 log det(I - c Sigma C) + 1/2 c^2 d^T (I - c Sigma C)^{-1} Sigma d,
// finite for c < 1 / ||M Sigma M^T|| where C = M^T M (Cholesky).  Negative
// arguments are always finite.
class GaussianQuadraticForm {
 public:
  // Throws Error{not_spd} when Sigma or C fails the PSD/SPD checks.
  GaussianQuadraticForm(Eigen::MatrixXd sigma, Eigen::MatrixXd cost,
                        Eigen::VectorXd lin);
  GaussianQuadraticForm(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& cost)
      : GaussianQuadraticForm(sigma, cost,
                              Eigen::VectorXd::Zero(sigma.rows())) {}

  double cgf(double c) const;   // extended real; +inf at/above c_max
  double c_max() const { return c_max_; }
  double mean() const;          // E[f] = 1/2 tr(Sigma C)

  bounds::CgfHandle handle(bool centered = false) const;

 private:
  Eigen::MatrixXd sigma_, cost_;
  Eigen::VectorXd lin_;
  Eigen::VectorXd spectrum_;  // eigenvalues of M Sigma M^T
  double c_max_;
};

}  // namespace pathuq::cgf

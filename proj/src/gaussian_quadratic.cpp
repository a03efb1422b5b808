#include "pathuq/gaussian_quadratic.hpp"

#include <cmath>

#include "pathuq/errors.hpp"

namespace pathuq::cgf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

GaussianQuadraticForm::GaussianQuadraticForm(Eigen::MatrixXd sigma,
                                             Eigen::MatrixXd cost,
                                             Eigen::VectorXd lin)
    : sigma_(std::move(sigma)), cost_(std::move(cost)), lin_(std::move(lin)) {
  const auto n = sigma_.rows();
  if (cost_.rows() != n || cost_.cols() != n || lin_.size() != n ||
      sigma_.cols() != n)
    raise(ErrorKind::invalid_argument, "dimension mismatch");
  if (!sigma_.isApprox(sigma_.transpose(), 1e-10) ||
      !cost_.isApprox(cost_.transpose(), 1e-10))
    raise(ErrorKind::not_spd, "Sigma and C must be symmetric");

  Eigen::LLT<Eigen::MatrixXd> cost_llt(cost_);
  if (cost_llt.info() != Eigen::Success)
    raise(ErrorKind::not_spd, "cost matrix is not positive-definite");
  const Eigen::MatrixXd M = Eigen::MatrixXd(cost_llt.matrixL()).transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M * sigma_ * M.transpose());
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
    raise(ErrorKind::not_spd, "Sigma is not positive-semidefinite");
  spectrum_ = es.eigenvalues().cwiseMax(0.0);
  const double beta_max = spectrum_.maxCoeff();
  c_max_ = beta_max > 0.0 ? 1.0 / beta_max : kInf;
}

double GaussianQuadraticForm::cgf(double c) const {
  if (c == 0.0) return 0.0;
  if (c > 0.0 && c >= c_max_) return kInf;
  // det(I - c Sigma C) = prod(1 - c beta_i) over the spectrum of
  // M Sigma M^T; log1p keeps the small-c regime at relative accuracy.
  double value = 0.0;
  for (Eigen::Index i = 0; i < spectrum_.size(); ++i)
    value += -0.5 * std::log1p(-c * spectrum_(i));
  if (!lin_.isZero(0.0)) {
    const auto n = sigma_.rows();
    const Eigen::MatrixXd A =
        Eigen::MatrixXd::Identity(n, n) - c * sigma_ * cost_;
    const Eigen::VectorXd x = A.partialPivLu().solve(sigma_ * lin_);
    value += 0.5 * c * c * lin_.dot(x);
  }
  return value;
}

double GaussianQuadraticForm::mean() const {
  return 0.5 * (sigma_ * cost_).trace();
}

bounds::CgfHandle GaussianQuadraticForm::handle(bool centered) const {
  bounds::CgfHandle h;
  if (centered) {
    const double m = mean();
    h.eval = [*this, m](double c) { return cgf(c) - c * m; };
  } else {
    h.eval = [*this](double c) { return cgf(c); };
  }
  h.c_max = c_max_;
  h.centered = centered;
  return h;
}

}  // namespace pathuq::cgf

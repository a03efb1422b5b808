#include "pathuq/phase_type.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "pathuq/errors.hpp"

namespace pathuq::relent {

PhaseType::PhaseType(Eigen::VectorXd entry, Eigen::MatrixXd sub_generator)
    : entry_(std::move(entry)), sub_gen_(std::move(sub_generator)) {
  const auto k = entry_.size();
  if (k == 0 || sub_gen_.rows() != k || sub_gen_.cols() != k)
    raise(ErrorKind::invalid_phase_type, "dimension mismatch");
  const double tol = 1e-12;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(sub_gen_(i, i) < 0.0))
      raise(ErrorKind::invalid_phase_type, "diagonal of T must be negative");
    for (Eigen::Index j = 0; j < k; ++j)
      if (i != j && sub_gen_(i, j) < -tol)
        raise(ErrorKind::invalid_phase_type, "off-diagonal of T must be >= 0");
    if (entry_(i) < -tol)
      raise(ErrorKind::invalid_phase_type, "entry vector must be >= 0");
  }
  if (std::abs(entry_.sum() - 1.0) > 1e-10)
    raise(ErrorKind::invalid_phase_type, "entry vector must sum to 1");
  exit_ = -sub_gen_ * Eigen::VectorXd::Ones(k);
  if (exit_.minCoeff() < -1e-10)
    raise(ErrorKind::invalid_phase_type, "-T 1 must be entrywise >= 0");
  exit_ = exit_.cwiseMax(0.0);
}

double PhaseType::density(double t) const {
  if (t < 0.0) return 0.0;
  const Eigen::MatrixXd expTt = (sub_gen_ * t).exp();
  return entry_.dot(expTt * exit_);
}

double PhaseType::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  const Eigen::MatrixXd expTt = (sub_gen_ * t).exp();
  return 1.0 - entry_.dot(expTt * Eigen::VectorXd::Ones(entry_.size()));
}

double PhaseType::mean() const {
  const Eigen::VectorXd x =
      sub_gen_.partialPivLu().solve(Eigen::VectorXd::Ones(entry_.size()));
  const double m = -entry_.dot(x);
  if (!std::isfinite(m) || m < 0.0)
    raise(ErrorKind::invalid_phase_type, "sub-generator is singular");
  return m;
}

PhaseType PhaseType::exponential(double rate) {
  if (!(rate > 0.0)) raise(ErrorKind::invalid_phase_type, "rate must be positive");
  Eigen::VectorXd nu(1);
  nu << 1.0;
  Eigen::MatrixXd T(1, 1);
  T << -rate;
  return PhaseType(nu, T);
}

PhaseType PhaseType::exponential_chain(const std::vector<double>& rates) {
  const int k = static_cast<int>(rates.size());
  if (k == 0) raise(ErrorKind::invalid_phase_type, "empty rate chain");
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(k);
  nu(0) = 1.0;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    if (!(rates[i] > 0.0))
      raise(ErrorKind::invalid_phase_type, "rates must be positive");
    T(i, i) = -rates[i];
    if (i + 1 < k) T(i, i + 1) = rates[i];
  }
  return PhaseType(nu, T);
}

}  // namespace pathuq::relent

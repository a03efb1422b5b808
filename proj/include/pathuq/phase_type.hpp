#pragma once
#include <Eigen/Dense>

namespace pathuq::relent {

// Absorption-time law PH(nu, T) of a CTMC with a single absorbing state:
// density nu e^{Tt} (-T 1), cdf 1 - nu e^{Tt} 1, mean -nu T^{-1} 1.
// T must have negative diagonal, nonnegative off-diagonal, and nonnegative
// exit rates -T 1; nu is a probability vector over the transient states.
class PhaseType {
 public:
  // Throws Error{invalid_phase_type} when the constraints fail.
  PhaseType(Eigen::VectorXd entry, Eigen::MatrixXd sub_generator);

  double density(double t) const;
  double cdf(double t) const;
  double mean() const;
  int order() const { return static_cast<int>(entry_.size()); }

  const Eigen::VectorXd& entry() const { return entry_; }
  const Eigen::MatrixXd& sub_generator() const { return sub_gen_; }
  const Eigen::VectorXd& exit_rates() const { return exit_; }

  static PhaseType exponential(double rate);
  // Convolution of independent exponentials taken in sequence.
  static PhaseType exponential_chain(const std::vector<double>& rates);

 private:
  Eigen::VectorXd entry_;
  Eigen::MatrixXd sub_gen_;
  Eigen::VectorXd exit_;
};

}  // namespace pathuq::relent

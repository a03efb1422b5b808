#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "pathuq/bounds.hpp"

namespace pathuq::relent {

// Girsanov budget for bounded drift perturbations of an SDE: the relative
// entropy up to tau ^ n is at most (sup||beta||)^2/2 * E[tau ^ n].
bounds::RelEntBudget girsanov_sde_budget(double drift_sup);

// Per-state waiting-time law consumed by the semi-Markov entropy rate.
struct WaitingDist {
  std::function<double(double)> density;
  double mean = 0.0;
};

// Entropy rate between semi-Markov processes sharing a jump chain:
//   H = (1/m_pi) sum_x pi(x) KL(alt waiting at x || Exp(exit_rate(x))),
//   m_pi = sum_x pi(x) * mean(alt waiting at x).
// The state sum runs until the cumulative pi mass reaches 1 - 1e-14.
// Throws Error{non_ergodic} when the mean sojourn time diverges.
double semi_markov_rate(const std::function<double(int)>& pi,
                        const std::function<double(int)>& exit_rate,
                        const std::function<WaitingDist(int)>& alt_waiting);

// Stationary distribution of the M/M/inf embedded jump chain,
// (arrival + service x) (arrival/service)^x e^{-arrival/service} / (2 arrival x!).
double mm_inf_jump_stationary(double arrival, double service, int x);

// Envelope constants for exponential-convolution waiting-time perturbations:
// the second stage rate lies in [exit/epsilon, exit/delta].
struct SemiMarkovEnvelope {
  double delta = 0.0;
  double epsilon = 0.0;
  double arrival = 1.0;
  double service = 1.0;
};

// r(delta, epsilon): the entropy-rate envelope for the convolution family,
// H(alt || base) <= arrival * r(delta, epsilon).  Requires 0 <= delta <=
// epsilon < 1; the integrand switches branch at u = log(1/eps)/(1/delta - 1).
double convolution_envelope_rate(double delta, double epsilon);

// Base/alternative transition matrices with initial distributions over a
// finite state set; alt must vanish wherever base does.
struct DiscreteChainPair {
  Eigen::MatrixXd base;
  Eigen::MatrixXd alt;
  Eigen::VectorXd base_init;
  Eigen::VectorXd alt_init;
};

// Exact relative entropy of the two chains restricted to the filtration up
// to (first hit of stop_states) ^ horizon, by enumerating all paths and
// summing alt-path-probability times the log-likelihood ratio.  Ground-truth
// oracle; capped at 6 states and horizon 12 (Error{state_space_too_large}).
double discrete_chain_stopped_rel_ent(const DiscreteChainPair& pair,
                                      const std::vector<int>& stop_states,
                                      int horizon);

// Jump-rate parameterization of a continuous-time Markov chain.
struct CtmcModel {
  std::function<double(int)> exit_rate;          // lambda(x)
  std::function<double(int, int)> jump_prob;     // a(x, y)
};

// Observed trajectory: states s_0..s_m with holding times h_0..h_{m-1}
// between them, plus censored time in the final state.
struct CtmcPath {
  std::vector<int> states;
  std::vector<double> holds;
  double final_hold = 0.0;
};

// Radon-Nikodym exponent of alt vs base along the path:
//   sum_jumps log( alt_rate * alt_prob / (base_rate * base_prob) )
//   - int (alt_rate - base_rate) ds.
// Throws Error{abs_cont_violation} when alt charges a base-null transition.
double ctmc_path_loglik(const CtmcPath& path, const CtmcModel& base,
                        const CtmcModel& alt);

// int_0^inf eta(s) rate e^{-rate s} ds.
double discounted_rel_ent(const std::function<double(double)>& eta,
                          double rate);

}  // namespace pathuq::relent

#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pathuq/phase_type.hpp"

namespace pathuq::mc {

struct SimConfig {
  std::int64_t n_paths = 10000;
  double dt = 1e-3;
  double t_max = 100.0;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_effective = 0;
  double capped_fraction = 0.0;  // paths truncated at t_max
};

// Deterministic per-path stream: the same (seed, index) pair produces the
// same draw sequence whether paths run serially or across threads.
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path_index);

struct PathSample {
  double value = 0.0;
  bool capped = false;
};

// Parallel map over path indices; the reduction is a pairwise sum over the
// stored per-path values, so the result is independent of thread count.
McEstimate estimate_paths(
    const SimConfig& cfg,
    const std::function<PathSample(std::mt19937_64&)>& sample_one);

// Level-hitting times of dX = (mu + beta(t, x)) dt + dW, X_0 = 0, detected at
// the first Euler grid crossing and capped at t_max.
struct HittingSample {
  std::vector<double> times;    // tau ^ t_max per path
  std::vector<bool> hit;        // whether the level was reached
  double capped_fraction = 0.0;
};
HittingSample sample_bm_hitting(
    double mu, const std::function<double(double, double)>& beta, double level,
    const SimConfig& cfg);

McEstimate summarize(const std::vector<double>& values, double capped_fraction);

// Absorption times of the CTMC underlying a phase-type law.
std::vector<double> sample_phase_type(const relent::PhaseType& pt,
                                      const SimConfig& cfg);

// Time-averaged queue length of a semi-Markov M/M/inf queue over [0, t_max].
// waiting_sampler(state, rng) draws one sojourn; the jump chain is the
// birth-death chain with the given arrival/service rates; X_0 ~
// Poisson(arrival/service).
McEstimate simulate_queue(
    double arrival, double service,
    const std::function<double(int, std::mt19937_64&)>& waiting_sampler,
    const SimConfig& cfg);

// Discounted quadratic cost int 1/2 x^T C x lambda e^{-lambda s} ds of
// dX = (A x + noise * beta(t, x)) dt + noise dW, X_0 ~ N(0, init_cov).
McEstimate lq_cost_estimate(
    const Eigen::MatrixXd& closed_loop, const Eigen::MatrixXd& cost,
    const Eigen::MatrixXd& noise, const Eigen::MatrixXd& init_cov,
    double discount,
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& beta,
    const SimConfig& cfg);

// Long-run time average of |x|^2 for dX = (-2x + b(x)) dt + sqrt(2) dW in
// d = 2 with b(x) = C(-sin x2, cos x1); one burn-in period per path.
McEstimate nonrev_time_average(double C, const SimConfig& cfg);

// Conditional discounted option value under the coupled asset/rate model:
//   dX = (r + dr) X dt + sigma X dW,   d(dr) = -gamma dr dt + vol_rate dW2,
// QoI (strike - level) E[e^{-I} 1{I >= 0} 1{tau < inf}] / P(I >= 0) with
// I the integrated rate up to the level-hitting time tau.  Ratio estimator
// with a delta-method standard error.
struct VasicekModel {
  double rate;            // r
  double vol_asset;       // sigma
  double mean_reversion;  // gamma
  double vol_rate;        // OU volatility
  double strike;          // K
  double exercise_level;  // L
  double spot;            // X_0
};
McEstimate vasicek_conditional_value(const VasicekModel& m, const SimConfig& cfg);

// Discounted payoff (strike - level) E[e^{-int r + dr} 1{tau < inf}] under the
// worst-case envelope rate dr(t) = dr_plus * 1[0, t_f].
McEstimate rate_drop_value(double r, double sigma, double strike, double level,
                           double x0, double dr_plus, double t_f,
                           const SimConfig& cfg);

struct ValidationReport {
  bool pass = false;
  std::string note;           // "interior", "boundary", or "outside"
  double capped_fraction = 0.0;
};

// PASS when [mean - 3 se, mean + 3 se] intersects [lower, upper].
ValidationReport mc_validate(double lower, double upper, const McEstimate& est);

}  // namespace pathuq::mc

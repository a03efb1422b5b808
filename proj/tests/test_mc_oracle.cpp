#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pathuq/hitting_law.hpp"
#include "pathuq/mc.hpp"
#include "pathuq/phase_type.hpp"
#include "pathuq/scenarios.hpp"

using namespace pathuq;

namespace {

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

}  // namespace

TEST_CASE("determinism: same seed and config give bit-identical estimates") {
  mc::SimConfig cfg;
  cfg.n_paths = 5000;
  cfg.dt = 2e-3;
  cfg.t_max = 40.0;
  cfg.seed = 1234;

  const auto a = mc::sample_bm_hitting(1.0, nullptr, 2.0, cfg);
  const auto b = mc::sample_bm_hitting(1.0, nullptr, 2.0, cfg);
  CHECK(a.times == b.times);

  // Thread count must not change the result either.
  mc::SimConfig threaded = cfg;
  threaded.threads = 2;
  const auto c = mc::sample_bm_hitting(1.0, nullptr, 2.0, threaded);
  CHECK(a.times == c.times);
  CHECK(mc::summarize(a.times, a.capped_fraction).mean ==
        mc::summarize(c.times, c.capped_fraction).mean);
}

TEST_CASE("baseline self-check: unperturbed hitting time mean is a/mu") {
  mc::SimConfig cfg;
  cfg.n_paths = 40000;
  cfg.dt = 5e-4;
  cfg.t_max = 60.0;
  cfg.seed = 7;
  cfg.threads = 2;
  const auto s = mc::sample_bm_hitting(1.0, nullptr, 2.0, cfg);
  const auto est = mc::summarize(s.times, s.capped_fraction);
  CHECK(est.capped_fraction < 1e-3);
  // 3 sigma plus a first-crossing discretization allowance.
  CHECK(std::abs(est.mean - 2.0) < 3.0 * est.std_error + 3.0 * std::sqrt(cfg.dt) * cfg.dt / cfg.dt * 0.1 + 0.02);
}

TEST_CASE("worst-case saturation: constant drifts approach the optimal bounds") {
  mc::SimConfig cfg;
  cfg.n_paths = 40000;
  cfg.dt = 5e-4;
  cfg.t_max = 80.0;
  cfg.seed = 11;
  cfg.threads = 2;
  const double alpha = 0.2;

  const auto up = mc::sample_bm_hitting(
      1.0, [alpha](double, double) { return -alpha; }, 2.0, cfg);
  const auto up_est = mc::summarize(up.times, up.capped_fraction);
  CHECK(up_est.mean == doctest::Approx(2.5).epsilon(0.02));

  const auto lo = mc::sample_bm_hitting(
      1.0, [alpha](double, double) { return alpha; }, 2.0, cfg);
  const auto lo_est = mc::summarize(lo.times, lo.capped_fraction);
  CHECK(lo_est.mean == doctest::Approx(5.0 / 3.0).epsilon(0.02));
}

TEST_CASE("phase-type sampling") {
  mc::SimConfig cfg;
  cfg.n_paths = 10000;
  cfg.t_max = 1e6;
  cfg.seed = 99;

  SUBCASE("exponential case passes a KS test at the 5% level") {
    const auto samples = mc::sample_phase_type(relent::PhaseType::exponential(2.0), cfg);
    const double d = ks_statistic(
        samples, [](double t) { return 1.0 - std::exp(-2.0 * t); });
    CHECK(d < 1.358 / std::sqrt(static_cast<double>(cfg.n_paths)));
  }
  SUBCASE("convolution case matches its density") {
    const auto pt = relent::PhaseType::exponential_chain({1.0, 3.0});
    const auto samples = mc::sample_phase_type(pt, cfg);
    const double d = ks_statistic(samples, [](double t) {
      return 1.0 - 1.5 * std::exp(-t) + 0.5 * std::exp(-3.0 * t);
    });
    CHECK(d < 1.358 / std::sqrt(static_cast<double>(cfg.n_paths)));
    // Empirical mean within 3 sigma of -nu T^{-1} 1.
    const auto est = mc::summarize(samples, 0.0);
    CHECK(std::abs(est.mean - pt.mean()) < 3.0 * est.std_error);
  }
  SUBCASE("huge-rate chain degenerates to zero") {
    const auto pt = relent::PhaseType::exponential(1e9);
    const auto samples = mc::sample_phase_type(pt, cfg);
    for (size_t i = 0; i < 50; ++i) CHECK(samples[i] < 1e-6);
  }
}

TEST_CASE("queue simulation") {
  mc::SimConfig cfg;
  cfg.n_paths = 250;
  cfg.t_max = 400.0;
  cfg.seed = 17;
  cfg.threads = 2;

  SUBCASE("stationary baseline time average is arrival/service") {
    auto exp_waiting = [](int x, std::mt19937_64& rng) {
      std::exponential_distribution<double> e(1.0 + 1.0 * x);
      return e(rng);
    };
    const auto est = mc::simulate_queue(1.0, 1.0, exp_waiting, cfg);
    CHECK(std::abs(est.mean - 1.0) < 3.0 * est.std_error);
  }
  SUBCASE("no arrivals: averages stay below the initial draw scale") {
    // Vanishing arrival rate: state 0 becomes near-absorbing because its
    // exit rate is the arrival rate itself.
    const double arrival = 1e-9;
    auto exp_waiting = [arrival](int x, std::mt19937_64& rng) {
      std::exponential_distribution<double> e(arrival + 1.0 * x);
      return e(rng);
    };
    const auto est = mc::simulate_queue(arrival, 1.0, exp_waiting, cfg);
    CHECK(est.mean < 1e-3);
  }
  SUBCASE("convolution perturbation lands inside the envelope interval") {
    const double eps = 0.05;
    auto perturbed = [eps](int x, std::mt19937_64& rng) {
      const double l = 1.0 + 1.0 * x;
      std::exponential_distribution<double> first(l), second(l / eps);
      return first(rng) + second(rng);
    };
    mc::SimConfig long_cfg = cfg;
    long_cfg.t_max = 800.0;
    const auto est = mc::simulate_queue(1.0, 1.0, perturbed, long_cfg);
    const auto table = scen::queue_bounds(1.0, 1.0, {eps}, {eps});
    const double lo = 1.0 * (1.0 + table.rows[0].lower);
    const double hi = 1.0 * (1.0 + table.rows[0].upper);
    const auto rep = mc::mc_validate(lo, hi, est);
    CHECK(rep.pass);
  }
}

TEST_CASE("mc_validate verdicts") {
  mc::McEstimate est;
  est.mean = 1.5;
  est.std_error = 0.01;
  CHECK(mc::mc_validate(1.0, 2.0, est).pass);
  CHECK(mc::mc_validate(1.0, 2.0, est).note == "interior");

  est.mean = 2.5;
  CHECK_FALSE(mc::mc_validate(1.0, 2.0, est).pass);
  CHECK(mc::mc_validate(1.0, 2.0, est).note == "outside");

  est.mean = 2.02;
  CHECK(mc::mc_validate(1.0, 2.0, est).pass);
  CHECK(mc::mc_validate(1.0, 2.0, est).note == "boundary");
}

TEST_CASE("negative control: a shrunk interval fails validation") {
  // Deliberately halve the budget-driven interval around a known mean.
  mc::SimConfig cfg;
  cfg.n_paths = 20000;
  cfg.dt = 1e-3;
  cfg.t_max = 60.0;
  cfg.seed = 23;
  cfg.threads = 2;
  const auto s = mc::sample_bm_hitting(
      1.0, [](double, double) { return 0.2; }, 2.0, cfg);
  const auto est = mc::summarize(s.times, s.capped_fraction);
  // True mean is 2/1.2 ~ 1.667; corrupted interval excludes it.
  const auto rep = mc::mc_validate(1.9, 2.1, est);
  CHECK_FALSE(rep.pass);
}

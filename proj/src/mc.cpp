#include "pathuq/mc.hpp"

#include <cmath>
#include <thread>

#include "pathuq/errors.hpp"

namespace pathuq::mc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void validate(const SimConfig& cfg) {
  if (cfg.n_paths < 1 || !(cfg.dt > 0.0) || !(cfg.t_max > 0.0))
    raise(ErrorKind::invalid_argument, "invalid simulation config");
}

double pairwise_sum(const std::vector<double>& v, size_t lo, size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

void run_blocks(std::int64_t n, int threads,
                const std::function<void(std::int64_t, std::int64_t)>& block) {
  const int n_threads = std::max(1, threads);
  if (n_threads == 1) {
    block(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (n + n_threads - 1) / n_threads;
  for (int t = 0; t < n_threads; ++t) {
    const std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(block, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path_index) {
  std::uint64_t state = seed ^ (0xd1342543de82ef95ULL * (path_index + 1));
  std::uint64_t s = splitmix64(state);
  return s ^ splitmix64(state);
}

McEstimate summarize(const std::vector<double>& values, double capped_fraction) {
  McEstimate est;
  const auto n = values.size();
  est.n_effective = static_cast<std::int64_t>(n);
  est.capped_fraction = capped_fraction;
  if (n == 0) return est;
  est.mean = pairwise_sum(values, 0, n) / static_cast<double>(n);
  if (n > 1) {
    std::vector<double> sq(n);
    for (size_t i = 0; i < n; ++i) {
      const double d = values[i] - est.mean;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq, 0, n) / static_cast<double>(n - 1);
    est.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return est;
}

McEstimate estimate_paths(
    const SimConfig& cfg,
    const std::function<PathSample(std::mt19937_64&)>& sample_one) {
  validate(cfg);
  std::vector<double> values(cfg.n_paths);
  std::vector<char> capped(cfg.n_paths, 0);
  run_blocks(cfg.n_paths, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      std::mt19937_64 rng(path_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      const PathSample s = sample_one(rng);
      values[i] = s.value;
      capped[i] = s.capped ? 1 : 0;
    }
  });
  std::int64_t n_capped = 0;
  for (char c : capped) n_capped += c;
  return summarize(values, static_cast<double>(n_capped) /
                               static_cast<double>(cfg.n_paths));
}

HittingSample sample_bm_hitting(
    double mu, const std::function<double(double, double)>& beta, double level,
    const SimConfig& cfg) {
  validate(cfg);
  if (level == 0.0) raise(ErrorKind::invalid_argument, "level must be nonzero");
  HittingSample out;
  out.times.resize(cfg.n_paths);
  out.hit.resize(cfg.n_paths);
  const double root_dt = std::sqrt(cfg.dt);
  run_blocks(cfg.n_paths, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      std::mt19937_64 rng(path_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      double x = 0.0, t = 0.0;
      bool hit = false;
      while (t < cfg.t_max) {
        const double drift = mu + (beta ? beta(t, x) : 0.0);
        x += drift * cfg.dt + root_dt * gauss(rng);
        t += cfg.dt;
        if ((level > 0.0 && x >= level) || (level < 0.0 && x <= level)) {
          hit = true;
          break;
        }
      }
      out.times[i] = hit ? t : cfg.t_max;
      out.hit[i] = hit;
    }
  });
  std::int64_t n_capped = 0;
  for (std::int64_t i = 0; i < cfg.n_paths; ++i)
    if (!out.hit[i]) ++n_capped;
  out.capped_fraction =
      static_cast<double>(n_capped) / static_cast<double>(cfg.n_paths);
  return out;
}

std::vector<double> sample_phase_type(const relent::PhaseType& pt,
                                      const SimConfig& cfg) {
  validate(cfg);
  const int k = pt.order();
  const Eigen::MatrixXd& T = pt.sub_generator();
  const Eigen::VectorXd& exit = pt.exit_rates();
  std::vector<double> out(cfg.n_paths);
  run_blocks(cfg.n_paths, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      std::mt19937_64 rng(path_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::exponential_distribution<double> exp1;
      // Draw the entry state.
      double u = unif(rng);
      int state = k - 1;
      for (int j = 0; j < k; ++j) {
        u -= pt.entry()(j);
        if (u <= 0.0) {
          state = j;
          break;
        }
      }
      double t = 0.0;
      while (t < cfg.t_max) {
        const double total = -T(state, state);
        t += exp1(rng) / total;
        // Absorb or jump in proportion to the outgoing intensities.
        double pick = unif(rng) * total;
        pick -= exit(state);
        if (pick <= 0.0) break;
        int next = state;
        for (int j = 0; j < k; ++j) {
          if (j == state) continue;
          pick -= T(state, j);
          if (pick <= 0.0) {
            next = j;
            break;
          }
        }
        state = next;
      }
      out[i] = std::min(t, cfg.t_max);
    }
  });
  return out;
}

McEstimate simulate_queue(
    double arrival, double service,
    const std::function<double(int, std::mt19937_64&)>& waiting_sampler,
    const SimConfig& cfg) {
  validate(cfg);
  if (!(arrival >= 0.0) || !(service > 0.0))
    raise(ErrorKind::invalid_argument, "invalid queue rates");
  std::vector<double> values(cfg.n_paths);
  run_blocks(cfg.n_paths, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      std::mt19937_64 rng(path_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::poisson_distribution<int> init(arrival / service);
      int x = init(rng);
      double t = 0.0, area = 0.0;
      while (t < cfg.t_max) {
        const double rate = arrival + service * x;
        if (rate <= 0.0) {
          t = cfg.t_max;
          break;
        }
        const double wait = waiting_sampler(x, rng);
        const double occupied = std::min(wait, cfg.t_max - t);
        area += x * occupied;
        t += wait;
        if (t >= cfg.t_max) break;
        const double p_up = arrival / rate;
        x += (unif(rng) < p_up) ? 1 : -1;
      }
      values[i] = area / cfg.t_max;
    }
  });
  return summarize(values, 0.0);
}

McEstimate lq_cost_estimate(
    const Eigen::MatrixXd& closed_loop, const Eigen::MatrixXd& cost,
    const Eigen::MatrixXd& noise, const Eigen::MatrixXd& init_cov,
    double discount,
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& beta,
    const SimConfig& cfg) {
  validate(cfg);
  const auto n = closed_loop.rows();
  // PSD square root for the initial draw (init_cov may be singular).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(init_cov);
  const Eigen::MatrixXd init_sqrt =
      es.eigenvectors() *
      es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
      es.eigenvectors().transpose();
  const double root_dt = std::sqrt(cfg.dt);
  std::vector<double> values(cfg.n_paths);
  run_blocks(cfg.n_paths, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      std::mt19937_64 rng(path_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      Eigen::VectorXd z(n), x(n);
      for (Eigen::Index j = 0; j < n; ++j) z(j) = gauss(rng);
      x = init_sqrt * z;
      double t = 0.0, acc = 0.0;
      while (t < cfg.t_max) {
        acc += 0.5 * x.dot(cost * x) * discount * std::exp(-discount * t) * cfg.dt;
        Eigen::VectorXd drift = closed_loop * x;
        if (beta) drift += noise * beta(t, x);
        for (Eigen::Index j = 0; j < n; ++j) z(j) = gauss(rng);
        x += drift * cfg.dt + root_dt * (noise * z);
        t += cfg.dt;
      }
      values[i] = acc;
    }
  });
  return summarize(values, 0.0);
}

McEstimate nonrev_time_average(double C, const SimConfig& cfg) {
  validate(cfg);
  const double root_2dt = std::sqrt(2.0 * cfg.dt);
  const double burn_in = std::min(10.0, 0.1 * cfg.t_max);
  std::vector<double> values(cfg.n_paths);
  run_blocks(cfg.n_paths, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      std::mt19937_64 rng(path_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      double x1 = 0.0, x2 = 0.0, t = 0.0, acc = 0.0, measured = 0.0;
      while (t < burn_in + cfg.t_max) {
        if (t >= burn_in) {
          acc += (x1 * x1 + x2 * x2) * cfg.dt;
          measured += cfg.dt;
        }
        const double d1 = -2.0 * x1 - C * std::sin(x2);
        const double d2 = -2.0 * x2 + C * std::cos(x1);
        x1 += d1 * cfg.dt + root_2dt * gauss(rng);
        x2 += d2 * cfg.dt + root_2dt * gauss(rng);
        t += cfg.dt;
      }
      values[i] = acc / measured;
    }
  });
  return summarize(values, 0.0);
}

McEstimate vasicek_conditional_value(const VasicekModel& m,
                                     const SimConfig& cfg) {
  validate(cfg);
  if (!(m.exercise_level > 0.0) || !(m.exercise_level < m.spot))
    raise(ErrorKind::invalid_argument, "need 0 < level < spot");
  const double root_dt = std::sqrt(cfg.dt);
  std::vector<double> numer(cfg.n_paths), denom(cfg.n_paths);
  std::vector<char> capped(cfg.n_paths, 0);
  run_blocks(cfg.n_paths, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      std::mt19937_64 rng(path_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      // Log-asset coordinate keeps the Euler scheme positivity-safe.
      double log_x = std::log(m.spot), dr = 0.0, integ = 0.0, t = 0.0;
      bool hit = false;
      const double log_level = std::log(m.exercise_level);
      while (t < cfg.t_max) {
        const double rate_now = m.rate + dr;
        integ += rate_now * cfg.dt;
        log_x += (rate_now - 0.5 * m.vol_asset * m.vol_asset) * cfg.dt +
                 m.vol_asset * root_dt * gauss(rng);
        dr += -m.mean_reversion * dr * cfg.dt + m.vol_rate * root_dt * gauss(rng);
        t += cfg.dt;
        if (log_x <= log_level) {
          hit = true;
          break;
        }
      }
      if (!hit) capped[i] = 1;
      const bool nonneg = integ >= 0.0;
      numer[i] = (hit && nonneg)
                     ? (m.strike - m.exercise_level) * std::exp(-integ)
                     : 0.0;
      denom[i] = nonneg ? 1.0 : 0.0;
    }
  });
  std::int64_t n_capped = 0;
  for (char c : capped) n_capped += c;

  const auto n = static_cast<double>(cfg.n_paths);
  const double mean_num = pairwise_sum(numer, 0, numer.size()) / n;
  const double mean_den = pairwise_sum(denom, 0, denom.size()) / n;
  if (!(mean_den > 0.0))
    raise(ErrorKind::non_finite, "conditioning event never sampled");
  McEstimate est;
  est.n_effective = cfg.n_paths;
  est.capped_fraction = n_capped / n;
  est.mean = mean_num / mean_den;
  // Delta method for the ratio estimator.
  double s_nn = 0.0, s_dd = 0.0, s_nd = 0.0;
  for (std::int64_t i = 0; i < cfg.n_paths; ++i) {
    const double dn = numer[i] - mean_num, dd = denom[i] - mean_den;
    s_nn += dn * dn;
    s_dd += dd * dd;
    s_nd += dn * dd;
  }
  s_nn /= (n - 1.0);
  s_dd /= (n - 1.0);
  s_nd /= (n - 1.0);
  const double ratio_var =
      (s_nn - 2.0 * est.mean * s_nd + est.mean * est.mean * s_dd) /
      (mean_den * mean_den);
  est.std_error = std::sqrt(std::max(0.0, ratio_var) / n);
  return est;
}

McEstimate rate_drop_value(double r, double sigma, double strike, double level,
                           double x0, double dr_plus, double t_f,
                           const SimConfig& cfg) {
  validate(cfg);
  const double root_dt = std::sqrt(cfg.dt);
  std::vector<double> values(cfg.n_paths);
  std::vector<char> capped(cfg.n_paths, 0);
  run_blocks(cfg.n_paths, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      std::mt19937_64 rng(path_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      double log_x = std::log(x0), integ = 0.0, t = 0.0;
      bool hit = false;
      const double log_level = std::log(level);
      while (t < cfg.t_max) {
        const double rate_now = r + (t <= t_f ? dr_plus : 0.0);
        integ += rate_now * cfg.dt;
        log_x += (rate_now - 0.5 * sigma * sigma) * cfg.dt +
                 sigma * root_dt * gauss(rng);
        t += cfg.dt;
        if (log_x <= log_level) {
          hit = true;
          break;
        }
      }
      if (!hit) capped[i] = 1;
      values[i] = hit ? (strike - level) * std::exp(-integ) : 0.0;
    }
  });
  std::int64_t n_capped = 0;
  for (char c : capped) n_capped += c;
  return summarize(values, static_cast<double>(n_capped) /
                               static_cast<double>(cfg.n_paths));
}

ValidationReport mc_validate(double lower, double upper, const McEstimate& est) {
  ValidationReport rep;
  rep.capped_fraction = est.capped_fraction;
  if (!std::isfinite(est.std_error)) {
    rep.pass = false;
    rep.note = "invalid standard error";
    return rep;
  }
  const double band = 3.0 * est.std_error;
  if (est.mean >= lower && est.mean <= upper) {
    rep.pass = true;
    rep.note = "interior";
  } else if (est.mean + band >= lower && est.mean - band <= upper) {
    rep.pass = true;
    rep.note = "boundary";
  } else {
    rep.pass = false;
    rep.note = "outside";
  }
  return rep;
}

}  // namespace pathuq::mc

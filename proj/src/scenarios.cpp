#include "pathuq/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "pathuq/bounds.hpp"
#include "pathuq/errors.hpp"
#include "pathuq/gaussian_quadratic.hpp"
#include "pathuq/hitting_law.hpp"
#include "pathuq/lq_control.hpp"
#include "pathuq/ou_squared.hpp"
#include "pathuq/quadrature.hpp"
#include "pathuq/queue_cgf.hpp"
#include "pathuq/relent.hpp"

namespace pathuq::scen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void parallel_for(size_t n, int threads, const std::function<void(size_t)>& body) {
  const int n_threads = std::max(1, threads);
  if (n_threads == 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const size_t chunk = (n + n_threads - 1) / n_threads;
  for (int t = 0; t < n_threads; ++t) {
    const size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi]() {
      for (size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// log P(Z <= -x) for Z standard normal, with the tail asymptotic where erfc
// underflows.
double log_normal_cdf_neg(double x) {
  if (x < 30.0) return std::log(0.5 * std::erfc(x * M_SQRT1_2));
  return -0.5 * x * x - std::log(x) - 0.5 * std::log(2.0 * M_PI);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

// Uncentered CGF of an indicator with success probability p, evaluated at
// relative accuracy for both small and large arguments.
bounds::CgfHandle indicator_cgf(double p) {
  bounds::CgfHandle h;
  h.centered = false;
  h.eval = [p](double z) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return z;
    if (std::abs(z) <= 30.0) return std::log1p(p * std::expm1(z));
    if (z > 0.0) return z + std::log(p + (1.0 - p) * std::exp(-z));
    return std::log(p * std::exp(z) + (1.0 - p));
  };
  return h;
}

}  // namespace

CurveTable bm_cdf_bounds(double mu, double a, double alpha,
                         const std::vector<double>& t_grid) {
  if (!(a * mu > 0.0))
    raise(ErrorKind::sign_mismatch, "level and drift must share a sign");
  if (!(alpha >= 0.0)) raise(ErrorKind::invalid_argument, "alpha must be >= 0");
  const cgf::DriftedBMHittingLaw law(a, mu);
  const double k_rate = 0.5 * alpha * alpha;

  CurveTable table;
  table.rows.resize(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) {
    const double horizon = t_grid[i];
    if (!(horizon > 0.0)) raise(ErrorKind::invalid_argument, "grid values must be > 0");
    CurvePoint row;
    row.sweep = horizon;
    row.baseline = law.cdf(horizon);

    bounds::TiltedExpectation te;
    te.log_density = [&law](double t) { return law.log_density(t); };
    te.atom_mass = law.atom();
    te.atom_payoff = 0.0;
    te.atom_penalty = k_rate * horizon;
    te.payoff = [horizon](double t) { return t <= horizon ? 1.0 : 0.0; };
    te.penalty = [k_rate, horizon](double t) {
      return k_rate * std::min(t, horizon);
    };
    row.upper = clamp01(bounds::tilted_bound(te, bounds::Side::upper).value);
    row.lower = clamp01(bounds::tilted_bound(te, bounds::Side::lower).value);

    const bounds::CgfHandle fixed_window = indicator_cgf(row.baseline);
    const double eta = k_rate * horizon;
    row.ref_upper =
        clamp01(bounds::info_bound(fixed_window, eta, bounds::Side::upper).value);
    row.ref_lower =
        clamp01(bounds::info_bound(fixed_window, eta, bounds::Side::lower).value);
    table.rows[i] = row;
  }
  return table;
}

CurveTable bm_mean_bounds(double mu, double a, double alpha) {
  if (!(a * mu > 0.0))
    raise(ErrorKind::sign_mismatch, "level and drift must share a sign");
  const double abs_mu = std::abs(mu), abs_a = std::abs(a);
  if (!(alpha >= 0.0) || !(alpha < abs_mu))
    raise(ErrorKind::invalid_argument, "need 0 <= alpha < |mu|");
  const cgf::DriftedBMHittingLaw law(a, mu);
  const auto iv = bounds::stopping_time_mean_bound(
      cgf::hitting_cgf_handle(law), relent::girsanov_sde_budget(alpha));

  CurvePoint row;
  row.sweep = std::numeric_limits<double>::quiet_NaN();
  row.baseline = law.mean();
  row.lower = iv.lower.value;
  row.upper = iv.upper.value;
  row.ref_lower = abs_a / (abs_mu + alpha);
  row.ref_upper = abs_a / (abs_mu - alpha);
  row.status =
      iv.upper.status == bounds::BoundStatus::infinite ? "infinite" : "ok";
  CurveTable table;
  table.rows.push_back(row);
  return table;
}

namespace {

// log of E[exp(z |x|^2 + (C^2/4)(sin^2 x2 + cos^2 x1))] under N(0, I/2):
// the Gaussian-quadratic part is absorbed into a rescaled covariance,
//   = -log(1 - z) + log E_{N(0, I/(2(1-z)))}[psi],  z < 1,
// leaving only the bounded trigonometric factor for Gauss-Hermite.
double nonrev_log_moment(double z, double c_pert, int order) {
  if (z >= 1.0) return kInf;
  const double var = 0.5 / (1.0 - z);
  const double q = 0.25 * c_pert * c_pert;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd cov = var * Eigen::MatrixXd::Identity(2, 2);
  const double trig = num::gauss_hermite_nd(
      [q](const Eigen::VectorXd& x) {
        const double s2 = std::sin(x(1)), c1 = std::cos(x(0));
        return std::exp(q * (s2 * s2 + c1 * c1));
      },
      mean, cov, order);
  return -std::log1p(-z) + std::log(trig);
}

}  // namespace

CurveTable nonrev_bounds(const std::vector<double>& c_grid, int threads) {
  // Fixed setting: V = |x|^2 in d = 2 (so the reference measure is
  // N(0, I/2)), observable |x|^2, log-Sobolev constant 1.
  constexpr int kOrder = 60;
  CurveTable table;
  table.rows.resize(c_grid.size());
  parallel_for(c_grid.size(), threads, [&](size_t i) {
    const double c_pert = c_grid[i];
    if (!(c_pert >= 0.0))
      raise(ErrorKind::invalid_argument, "perturbation grid must be >= 0");
    CurvePoint row;
    row.sweep = c_pert;
    row.baseline = 1.0;  // E|x|^2 under N(0, I/2)

    bounds::CgfHandle tilted;
    tilted.c_max = 1.0;
    tilted.arg_floor = 1e-6;
    tilted.eval = [c_pert](double z) { return nonrev_log_moment(z, c_pert, kOrder); };
    row.upper = bounds::info_bound(tilted, 0.0, bounds::Side::upper).value;
    row.lower = bounds::info_bound(tilted, 0.0, bounds::Side::lower).value;

    // Reference: entropy-rate budget sup|b|^2/4 = C^2/2 with the centered
    // Gaussian-quadratic CGF -log(1-z) - z.
    bounds::CgfHandle centered;
    centered.c_max = 1.0;
    centered.centered = true;
    centered.eval = [](double z) {
      return z < 1.0 ? -std::log1p(-z) - z : kInf;
    };
    const double budget = 0.5 * c_pert * c_pert;
    row.ref_upper =
        1.0 + bounds::info_bound(centered, budget, bounds::Side::upper).value;
    row.ref_lower =
        1.0 + bounds::info_bound(centered, budget, bounds::Side::lower).value;
    table.rows[i] = row;
  });
  return table;
}

CurveTable lq_bounds(const std::vector<double>& kappa_grid, double alpha,
                     int threads, const std::array<double, 4>& drift) {
  CurveTable table;
  table.rows.resize(kappa_grid.size());
  parallel_for(kappa_grid.size(), threads, [&](size_t i) {
    lqg::LqProblem prob;
    prob.drift = Eigen::MatrixXd(2, 2);
    prob.drift << drift[0], drift[1], drift[2], drift[3];
    prob.control = Eigen::MatrixXd(2, 1);
    prob.control << kappa_grid[i], 0.0;
    prob.state_cost = Eigen::MatrixXd::Identity(2, 2);
    prob.control_cost = Eigen::MatrixXd::Identity(1, 1);
    prob.discount = 0.5;
    prob.init_cov = Eigen::MatrixXd::Zero(2, 2);
    prob.noise = Eigen::MatrixXd::Identity(2, 2);
    const auto iv = lqg::control_cost_bound(prob, alpha);
    CurvePoint row;
    row.sweep = kappa_grid[i];
    row.baseline = iv.baseline;
    row.lower = iv.lower;
    row.upper = iv.upper;
    table.rows[i] = row;
  });
  return table;
}

CurveTable queue_bounds(double arrival, double service,
                        const std::vector<double>& delta_grid,
                        const std::vector<double>& epsilon_grid) {
  if (!(arrival > 0.0) || !(service > 0.0))
    raise(ErrorKind::invalid_argument, "rates must be positive");
  std::vector<std::pair<double, double>> points;
  if (delta_grid.size() == epsilon_grid.size()) {
    for (size_t i = 0; i < delta_grid.size(); ++i)
      points.emplace_back(delta_grid[i], epsilon_grid[i]);
  } else {
    for (double d : delta_grid)
      for (double e : epsilon_grid)
        if (d <= e) points.emplace_back(d, e);
  }
  CurveTable table;
  for (const auto& [delta, eps] : points) {
    const double r = relent::convolution_envelope_rate(delta, eps);
    CurvePoint row;
    row.sweep = eps;
    row.baseline = arrival / service;
    row.upper = 2.0 * std::sqrt(r) + r;
    row.lower = (r < 1.0) ? -(2.0 * std::sqrt(r) - r) : -1.0;
    table.rows.push_back(row);
  }
  return table;
}

namespace {

struct VasicekPoint {
  double vol_rate;
  double vol_asset;
};

// Inner integral of the conditional-value CGF at hitting time t:
//   log E_z[ exp(z_tilt (K-L) e^{-z} 1{z>=0}) ],  z ~ N(r t, sigma_t^2).
// Pieces, all combined in log space:
//   - the exact z < 0 mass (tilt factor 1),
//   - 200-point Gauss-Legendre over the standardized bulk
//     u = (z - m)/sigma in [max(-10, -m/sigma), 10], which keeps narrow
//     Gaussians (small rate volatility) resolved,
//   - 200-point Gauss-Legendre in z over the left remainder [0, m - 10 sigma]
//     where the tilt factor peaks when the tilt is large,
//   - the Gaussian tail above m + 10 sigma.
double vasicek_log_inner(double z_tilt, double payout, double m_t,
                         double sigma_t) {
  if (sigma_t < 1e-10 * std::max(1.0, m_t))
    return z_tilt * payout * std::exp(-std::max(m_t, 0.0));
  const auto& rule = num::gauss_legendre_rule(200);
  std::vector<double> log_terms;
  log_terms.reserve(404);
  log_terms.push_back(log_normal_cdf_neg(m_t / sigma_t));  // z < 0, factor 1

  const double u_lo = std::max(-10.0, -m_t / sigma_t);
  const double log_phi_norm = -0.5 * std::log(2.0 * M_PI);
  // Bulk in the standardized variable.
  {
    const double half = 0.5 * (10.0 - u_lo);
    const double mid = 0.5 * (10.0 + u_lo);
    for (int j = 0; j < 200; ++j) {
      const double u = mid + half * rule.nodes[j];
      const double z = m_t + sigma_t * u;
      log_terms.push_back(std::log(half * rule.weights[j]) + log_phi_norm -
                          0.5 * u * u + z_tilt * payout * std::exp(-z));
    }
  }
  // Left remainder in z, present only when the bulk window misses z = 0.
  const double z_mid = m_t - 10.0 * sigma_t;
  if (z_mid > 0.0) {
    const double half = 0.5 * z_mid;
    const double log_norm = log_phi_norm - std::log(sigma_t);
    for (int j = 0; j < 200; ++j) {
      const double z = half * (rule.nodes[j] + 1.0);
      const double dz = (z - m_t) / sigma_t;
      log_terms.push_back(std::log(half * rule.weights[j]) + log_norm -
                          0.5 * dz * dz + z_tilt * payout * std::exp(-z));
    }
  }
  log_terms.push_back(log_normal_cdf_neg(10.0) +
                      z_tilt * payout * std::exp(-(m_t + 10.0 * sigma_t)));
  const double shift = *std::max_element(log_terms.begin(), log_terms.end());
  double sum = 0.0;
  for (double lt : log_terms) sum += std::exp(lt - shift);
  return shift + std::log(sum);
}

CurvePoint vasicek_point(const VasicekConfig& cfg, double sweep_value) {
  const double vol_rate = cfg.sweep_vol_rate ? sweep_value : cfg.vol_rate;
  const double vol_asset = cfg.sweep_vol_rate ? cfg.vol_asset : sweep_value;
  const double r = cfg.rate, gamma = cfg.mean_reversion;
  const double strike = cfg.strike, level = cfg.exercise_level, spot = cfg.spot;
  if (!(level > 0.0) || !(level < std::min(strike, spot)))
    raise(ErrorKind::invalid_argument, "need 0 < L < min(K, X0)");

  CurvePoint row;
  row.sweep = sweep_value;
  row.baseline =
      (strike - level) * std::pow(level / spot, 2.0 * r / (vol_asset * vol_asset));

  const double a = -std::log(spot / level) / vol_asset;
  const double mu = r / vol_asset - 0.5 * vol_asset;
  if (!(a * mu > 0.0))
    raise(ErrorKind::sign_mismatch,
          "hitting level and drift have opposite signs");
  const cgf::DriftedBMHittingLaw law(a, mu);
  const double atom = law.atom();
  const cgf::OUSquaredIntegral ou{gamma, vol_rate, vol_asset};

  const bool assumption_ok = r > vol_rate * vol_rate / (2.0 * gamma * gamma);
  if (!assumption_ok) row.status = "assumption_violated";

  // Relative-entropy budget via the bootstrap over the squared-OU moment.
  const double branch = ou.branch_point();
  const double mu_decay = 0.5 * mu * mu;
  bounds::CgfHandle budget_cgf;
  budget_cgf.c_max = branch;
  budget_cgf.eval = [&](double lam) {
    if (lam >= branch) return kInf;
    if (atom > 0.0) return kInf;  // tau = inf carries an infinite exponent
    if (lam > 0.0) {
      // Integrability: the integrand grows like e^{gamma(1-sqrt(w)) t / 2}.
      const double w = 1.0 - lam / branch;
      if (0.5 * gamma * (1.0 - std::sqrt(w)) >= mu_decay) return kInf;
    }
    return num::log_integral_semi_infinite(
        [&](double t) {
          return law.log_density(t) + cgf::ou_squared_log_mgf(ou, t, lam);
        },
        {}, num::QuadratureSpec{1e-15, 1e-12, 50});
  };
  const double budget = bounds::rel_ent_bootstrap(budget_cgf);
  if (!std::isfinite(budget)) {
    row.status = "infinite";
    row.lower = 0.0;
    row.upper = kInf;
    return row;
  }

  // Baseline probability of a nonnegative integrated rate.
  const double p0 = std::min(
      1.0, num::integrate_semi_infinite([&](double t) {
             const double sd = std::sqrt(cgf::integrated_ou_variance(ou, t));
             const double prob =
                 sd < 1e-10 * std::max(1.0, r * t)
                     ? (r * t >= 0.0 ? 1.0 : 0.0)
                     : normal_cdf(r * t / sd);
             return law.density(t) * prob;
           }) +
          atom);
  const auto divisors = bounds::event_prob_bound(p0, budget);

  // CGF of the discounted (conditioned) payout against the hitting law.
  const double payout = strike - level;
  bounds::CgfHandle value_cgf;
  value_cgf.arg_floor = 1e-5;
  value_cgf.eval = [&](double z) {
    return num::log_integral_semi_infinite(
        [&](double t) {
          const double sd = std::sqrt(cgf::integrated_ou_variance(ou, t));
          return law.log_density(t) +
                 vasicek_log_inner(z, payout, r * t, sd);
        },
        {{atom, 0.0}}, num::QuadratureSpec{1e-15, 1e-12, 50});
  };
  const double upper_num =
      bounds::info_bound(value_cgf, budget, bounds::Side::upper).value;
  const double lower_num = std::max(
      0.0, bounds::info_bound(value_cgf, budget, bounds::Side::lower).value);

  if (!(divisors.lower > 0.0) || !std::isfinite(upper_num)) {
    row.status = "infinite";
    row.lower = 0.0;
    row.upper = kInf;
    return row;
  }
  // The conditional value cannot exceed the undiscounted payout.
  row.upper = std::min(upper_num / divisors.lower, payout);
  row.lower = lower_num / divisors.upper;
  return row;
}

}  // namespace

CurveTable vasicek_bounds(const VasicekConfig& cfg) {
  if (cfg.sweep.empty())
    raise(ErrorKind::invalid_argument, "sweep grid must be nonempty");
  CurveTable table;
  table.rows.resize(cfg.sweep.size());
  parallel_for(cfg.sweep.size(), cfg.threads, [&](size_t i) {
    table.rows[i] = vasicek_point(cfg, cfg.sweep[i]);
  });
  return table;
}

namespace {

struct RateDropBounds {
  double lower = 0.0;
  double upper = kInf;
};

// Goal bounds for one (t_f, base-rate kappa) pair.  The envelope on the true
// rate r + dr is [r, r + bump * 1_{[0, t_f]}]; relative to the kappa-baseline
// the drift envelope is h-(t) = r - kappa, h+(t) = r - kappa + bump 1_{t<=tf}.
RateDropBounds rate_drop_goal(const RateDropConfig& cfg, double t_f,
                              double kappa) {
  const double sigma = cfg.vol_asset, r = cfg.rate, bump = cfg.rate_bump;
  const double a = -std::log(cfg.spot / cfg.exercise_level) / sigma;
  const double mu = kappa / sigma - 0.5 * sigma;
  RateDropBounds out;
  if (!(a * mu > 0.0)) return out;  // defective baseline; skip this kappa
  const cgf::DriftedBMHittingLaw law(a, mu);

  const double h1 = std::max(r - kappa + bump, kappa - r);
  const double h2 = std::abs(r - kappa);
  const double pen_scale = 0.5 / (sigma * sigma);
  // Late-time exponent must lose to the hitting density decay mu^2/2.
  if (pen_scale * h2 * h2 >= 0.5 * mu * mu) return out;

  const double payout = cfg.strike - cfg.exercise_level;
  auto penalty = [=](double t) {
    return pen_scale * (h1 * h1 * std::min(t, t_f) +
                        h2 * h2 * std::max(t - t_f, 0.0));
  };

  bounds::TiltedExpectation te_up;
  te_up.log_density = [law](double t) { return law.log_density(t); };
  te_up.atom_mass = law.atom();
  te_up.payoff = [=](double t) { return payout * std::exp(-r * t); };
  te_up.penalty = penalty;
  out.upper = bounds::tilted_bound(te_up, bounds::Side::upper).value;

  bounds::TiltedExpectation te_lo = te_up;
  te_lo.payoff = [=](double t) {
    return payout * std::exp(-r * t - bump * std::min(t, t_f));
  };
  out.lower =
      std::max(0.0, bounds::tilted_bound(te_lo, bounds::Side::lower).value);
  return out;
}

double optimize_kappa(const std::function<double(double)>& objective, double r,
                      double kappa_cap) {
  // Coarse pre-scan (always including kappa = r) then golden refinement.
  std::vector<double> grid;
  const double lo = 0.2 * r, hi = std::min(2.0 * r, kappa_cap);
  for (int i = 0; i <= 16; ++i) grid.push_back(lo + (hi - lo) * i / 16.0);
  grid.push_back(r);
  std::sort(grid.begin(), grid.end());
  size_t best = 0;
  double best_val = kInf;
  std::vector<double> vals(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    vals[i] = objective(grid[i]);
    if (vals[i] < best_val) best_val = vals[i], best = i;
  }
  if (best == 0 || best + 1 == grid.size()) return grid[best];
  double a = grid[best - 1], b = grid[best + 1];
  constexpr double kGold = 0.3819660112501051;
  double x1 = a + kGold * (b - a), x2 = b - kGold * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 24; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = a + kGold * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = b - kGold * (b - a);
      f2 = objective(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

}  // namespace

CurveTable rate_drop_bounds(const RateDropConfig& cfg) {
  if (cfg.tf_grid.empty())
    raise(ErrorKind::invalid_argument, "t_f grid must be nonempty");
  if (!(cfg.rate > 0.0) || !(cfg.rate_bump >= 0.0))
    raise(ErrorKind::invalid_argument, "invalid rate parameters");
  const double sigma = cfg.vol_asset;
  // Baseline drift must point toward the exercise level: kappa < sigma^2/2.
  const double kappa_cap = 0.499 * sigma * sigma;

  const double payout = cfg.strike - cfg.exercise_level;
  const double base_exp = 2.0 / (sigma * sigma);
  const double baseline =
      payout * std::pow(cfg.exercise_level / cfg.spot, base_exp * cfg.rate);
  const double ref_lower =
      payout * std::pow(cfg.exercise_level / cfg.spot,
                        base_exp * (cfg.rate + cfg.rate_bump));

  CurveTable table;
  table.rows.resize(cfg.tf_grid.size());
  parallel_for(cfg.tf_grid.size(), cfg.threads, [&](size_t i) {
    const double t_f = cfg.tf_grid[i];
    if (!(t_f >= 0.0)) raise(ErrorKind::invalid_argument, "t_f must be >= 0");
    CurvePoint row;
    row.sweep = t_f;
    row.baseline = baseline;
    row.ref_lower = ref_lower;
    row.ref_upper = baseline;  // the envelope keeps the rate at or above r

    if (!cfg.optimize_base_rate) {
      const RateDropBounds b = rate_drop_goal(cfg, t_f, cfg.rate);
      row.lower = b.lower;
      row.upper = b.upper;
    } else {
      const double k_up = optimize_kappa(
          [&](double k) { return rate_drop_goal(cfg, t_f, k).upper; },
          cfg.rate, kappa_cap);
      const double k_lo = optimize_kappa(
          [&](double k) { return -rate_drop_goal(cfg, t_f, k).lower; },
          cfg.rate, kappa_cap);
      row.upper = rate_drop_goal(cfg, t_f, k_up).upper;
      row.lower = rate_drop_goal(cfg, t_f, k_lo).lower;
    }
    if (!std::isfinite(row.upper)) row.status = "infinite";
    table.rows[i] = row;
  });
  return table;
}

}  // namespace pathuq::scen

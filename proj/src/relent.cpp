#include "pathuq/relent.hpp"

#include <cmath>

#include "pathuq/errors.hpp"
#include "pathuq/quadrature.hpp"

namespace pathuq::relent {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bounds::RelEntBudget girsanov_sde_budget(double drift_sup) {
  if (!(drift_sup >= 0.0) || !std::isfinite(drift_sup))
    raise(ErrorKind::invalid_argument, "drift bound must be finite and >= 0");
  return bounds::RelEntBudget::affine(0.0, 0.5 * drift_sup * drift_sup);
}

double semi_markov_rate(const std::function<double(int)>& pi,
                        const std::function<double(int)>& exit_rate,
                        const std::function<WaitingDist(int)>& alt_waiting) {
  double kl_sum = 0.0, sojourn = 0.0, mass = 0.0;
  for (int x = 0; x < 100000; ++x) {
    const double px = pi(x);
    if (px < 0.0) raise(ErrorKind::invalid_argument, "pi must be nonnegative");
    if (px > 0.0) {
      const WaitingDist alt = alt_waiting(x);
      if (!std::isfinite(alt.mean))
        raise(ErrorKind::non_ergodic, "alternative sojourn mean diverges");
      const double lambda = exit_rate(x);
      if (!(lambda > 0.0))
        raise(ErrorKind::invalid_argument, "exit rates must be positive");
      // KL(alt || Exp(lambda)) by quadrature; 0 log 0 handled as 0.
      const double kl = num::integrate_semi_infinite([&](double t) {
        const double h = alt.density(t);
        if (!(h > 0.0)) return 0.0;
        const double log_base = std::log(lambda) - lambda * t;
        return h * (std::log(h) - log_base);
      });
      kl_sum += px * kl;
      sojourn += px * alt.mean;
    }
    mass += px;
    if (mass >= 1.0 - 1e-14) break;
  }
  if (!(sojourn > 0.0) || !std::isfinite(sojourn))
    raise(ErrorKind::non_ergodic, "mean sojourn time not positive and finite");
  return kl_sum / sojourn;
}

double mm_inf_jump_stationary(double arrival, double service, int x) {
  if (!(arrival > 0.0) || !(service > 0.0) || x < 0)
    raise(ErrorKind::invalid_argument, "invalid M/M/inf parameters");
  const double r = arrival / service;
  const double log_pi = std::log(arrival + service * x) + x * std::log(r) - r -
                        std::log(2.0 * arrival) - std::lgamma(x + 1.0);
  return std::exp(log_pi);
}

double convolution_envelope_rate(double delta, double epsilon) {
  if (!(delta >= 0.0) || !(delta <= epsilon) || !(epsilon < 1.0))
    raise(ErrorKind::invalid_argument, "need 0 <= delta <= epsilon < 1");
  if (epsilon == 0.0) return 0.0;
  const double inv_eps = 1.0 / epsilon - 1.0;
  const double inv_del = delta > 0.0 ? 1.0 / delta - 1.0 : kInf;
  const double u_switch =
      std::isinf(inv_del) ? 0.0 : std::log(1.0 / epsilon) / inv_del;
  auto integrand = [&](double u) {
    // -expm1 keeps 1 - e^{-x} accurate near 0; b -> 0 forces first*log b -> 0.
    const double b = -std::expm1(-inv_del * u) / (1.0 - epsilon);
    if (!(b > 0.0)) return 0.0;
    const double first = (u < u_switch)
                             ? -std::expm1(-inv_eps * u) / (1.0 - delta)
                             : b;
    return std::exp(-u) * first * std::log(b);
  };
  const double integral = num::integrate_semi_infinite(integrand);
  return 2.0 / (1.0 + delta) * integral;
}

namespace {

double initial_rel_ent(const Eigen::VectorXd& alt, const Eigen::VectorXd& base) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < alt.size(); ++i) {
    if (alt(i) > 0.0) {
      if (!(base(i) > 0.0))
        raise(ErrorKind::abs_cont_violation,
              "alternative initial mass on a base-null state");
      r += alt(i) * std::log(alt(i) / base(i));
    }
  }
  return r;
}

// Expected log-likelihood sum over the path tree rooted at `state`, walking
// every path explicitly (no memoization: this is the enumeration oracle).
double enumerate_paths(const DiscreteChainPair& pair,
                       const std::vector<bool>& stop, int state, int depth,
                       int horizon) {
  if (stop[state] || depth == horizon) return 0.0;
  double acc = 0.0;
  const auto n = pair.base.rows();
  for (Eigen::Index y = 0; y < n; ++y) {
    const double q = pair.alt(state, y);
    if (q <= 0.0) continue;
    const double p = pair.base(state, y);
    if (!(p > 0.0))
      raise(ErrorKind::abs_cont_violation,
            "alternative kernel charges a base-null transition");
    acc += q * (std::log(q / p) +
                enumerate_paths(pair, stop, static_cast<int>(y), depth + 1,
                                horizon));
  }
  return acc;
}

}  // namespace

double discrete_chain_stopped_rel_ent(const DiscreteChainPair& pair,
                                      const std::vector<int>& stop_states,
                                      int horizon) {
  const auto n = pair.base.rows();
  if (n > 6 || horizon > 12)
    raise(ErrorKind::state_space_too_large,
          "enumeration oracle capped at 6 states and horizon 12");
  if (pair.alt.rows() != n || pair.base.cols() != n || pair.alt.cols() != n ||
      pair.base_init.size() != n || pair.alt_init.size() != n || horizon < 0)
    raise(ErrorKind::invalid_argument, "dimension mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(pair.base.row(i).sum() - 1.0) > 1e-10 ||
        std::abs(pair.alt.row(i).sum() - 1.0) > 1e-10)
      raise(ErrorKind::invalid_argument, "rows must sum to 1");
  }
  std::vector<bool> stop(n, false);
  for (int s : stop_states) {
    if (s < 0 || s >= n) raise(ErrorKind::invalid_argument, "bad stop state");
    stop[s] = true;
  }
  double r = initial_rel_ent(pair.alt_init, pair.base_init);
  for (Eigen::Index x = 0; x < n; ++x)
    if (pair.alt_init(x) > 0.0)
      r += pair.alt_init(x) *
           enumerate_paths(pair, stop, static_cast<int>(x), 0, horizon);
  return r;
}

double ctmc_path_loglik(const CtmcPath& path, const CtmcModel& base,
                        const CtmcModel& alt) {
  if (path.states.empty() || path.holds.size() + 1 != path.states.size())
    raise(ErrorKind::invalid_argument, "path needs k states and k-1 holds");
  double loglik = 0.0;
  for (size_t i = 0; i + 1 < path.states.size(); ++i) {
    const int x = path.states[i], y = path.states[i + 1];
    const double base_flux = base.exit_rate(x) * base.jump_prob(x, y);
    const double alt_flux = alt.exit_rate(x) * alt.jump_prob(x, y);
    if (!(base_flux > 0.0)) {
      if (alt_flux > 0.0)
        raise(ErrorKind::abs_cont_violation,
              "alternative jump on a base-null transition");
      continue;  // 0/0 convention
    }
    loglik += std::log(alt_flux / base_flux);
    loglik -= (alt.exit_rate(x) - base.exit_rate(x)) * path.holds[i];
  }
  const int last = path.states.back();
  loglik -= (alt.exit_rate(last) - base.exit_rate(last)) * path.final_hold;
  return loglik;
}

double discounted_rel_ent(const std::function<double(double)>& eta,
                          double rate) {
  if (!(rate > 0.0)) raise(ErrorKind::invalid_argument, "rate must be > 0");
  try {
    return num::integrate_semi_infinite(
        [&](double s) { return eta(s) * rate * std::exp(-rate * s); });
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::max_subdivisions)
      raise(ErrorKind::non_integrable, "discounted budget does not converge");
    throw;
  }
}

}  // namespace pathuq::relent

#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pathuq::scen {

// One row of a result table.  `lower`/`upper` are the new bounds,
// `ref_lower`/`ref_upper` the comparison bounds where the setting has any
// (non-goal-oriented or comparison-principle references).
struct CurvePoint {
  double sweep = 0.0;
  double baseline = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> ref_lower;
  std::optional<double> ref_upper;
  std::string status = "ok";
};

struct CurveTable {
  std::vector<CurvePoint> rows;
};

// Bounds on the CDF of the level-`a` hitting time of mu*t + W_t under all
// drift perturbations bounded by alpha, per horizon T: stopped-penalty bounds
// in lower/upper, fixed-window references in ref_lower/ref_upper, baseline
// CDF in baseline.  All values clamped to [0, 1].
CurveTable bm_cdf_bounds(double mu, double a, double alpha,
                         const std::vector<double>& t_grid);

// Interval for the expected hitting time under the same perturbation family;
// single row, refs carry the comparison-principle values |a|/(|mu| -+ alpha).
// Requires 0 <= alpha < |mu| and sign(a) = sign(mu).
CurveTable bm_mean_bounds(double mu, double a, double alpha);

// Invariant-measure bounds for the non-reversible diffusion with potential
// |x|^2 (d = 2), observable |x|^2, perturbation b(x) = C(-sin x2, cos x1),
// log-Sobolev constant 1.  refs carry the entropy-rate bounds built from
// sup |b|^2 / 4.
CurveTable nonrev_bounds(const std::vector<double>& c_grid, int threads = 1);

// Discounted quadratic cost interval for the controller-strength sweep.
// The open-loop drift is row-major; the control matrix is [kappa, 0]^T with
// kappa swept, Q = I, R = 1, discount 1/2, Sigma_0 = 0, unit noise.
CurveTable lq_bounds(const std::vector<double>& kappa_grid, double alpha,
                     int threads = 1,
                     const std::array<double, 4>& drift = {2.0, 0.1, 0.1, -1.0});

// Relative-error envelope for semi-Markov (exponential-convolution)
// perturbations of the M/M/inf queue.  lower/upper are bounds on the
// RELATIVE error of the long-run mean queue length (0 sits inside).
// Grids of equal length are zipped; otherwise the delta <= epsilon part of
// the product is enumerated with sweep = epsilon.
CurveTable queue_bounds(double arrival, double service,
                        const std::vector<double>& delta_grid,
                        const std::vector<double>& epsilon_grid);

struct VasicekConfig {
  double rate = 1.25;            // r
  double vol_asset = 4.0;        // sigma
  double mean_reversion = 2.0;   // gamma
  double vol_rate = 1.0;         // used when sweeping vol_asset
  double strike = 1.0;           // K
  double exercise_level = 0.5;   // L
  double spot = 2.0;             // X_0
  std::vector<double> sweep;     // grid of vol_rate or vol_asset values
  bool sweep_vol_rate = true;    // false: sweep vol_asset instead
  int threads = 1;
};

// Conditional put-value interval under the mean-reverting rate perturbation.
// Rows where r <= vol_rate^2/(2 gamma^2) are computed but flagged
// "assumption_violated"; vacuous bounds are flagged "infinite".
CurveTable vasicek_bounds(const VasicekConfig& cfg);

struct RateDropConfig {
  double rate = 2.0;            // r
  double vol_asset = 3.0;       // sigma
  double strike = 1.0;          // K
  double exercise_level = 0.5;  // L
  double spot = 2.0;            // X_0
  double rate_bump = 0.3;       // dr_plus
  std::vector<double> tf_grid;  // completion-time sweep
  bool optimize_base_rate = false;
  int threads = 1;
};

// Option-value bounds when the rate drops from r + rate_bump to r by t_f;
// refs carry the comparison-principle interval.  With optimize_base_rate the
// baseline rate parameter is minimized over as well.
CurveTable rate_drop_bounds(const RateDropConfig& cfg);

}  // namespace pathuq::scen

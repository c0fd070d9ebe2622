#pragma once

#include "hullmod/bounds.hpp"
#include "hullmod/classdata.hpp"
#include "hullmod/complexity.hpp"
#include "hullmod/generators.hpp"
#include "hullmod/hullopt.hpp"
#include "hullmod/report.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hullmod {

/// Least-squares line through (log x, log y).
struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of the log residuals
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t points = 0;
};

/// Points are sorted by x and the `trim` smallest and largest are dropped
/// before fitting. Needs at least two remaining points, all positive.
RateFit fit_power_law(std::span<const double> x, std::span<const double> y, std::size_t trim = 2);

/// 16 hex digits of FNV-1a over the text.
std::string config_hash(const std::string& canonical);

/// Geometric grid from just above the diameter down to half the smallest
/// positive distance, so the top knot has covering number 1 and the bottom
/// knot has modulus exactly 0.
std::vector<double> auto_eps_grid(const EmpiricalGeometry& geometry, std::size_t count);

struct Theorem1Config {
  std::vector<double> deltas;
  std::vector<double> eps_grid;  // empty: auto_eps_grid(geometry, 24)
  std::size_t draws = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double sigmas = 3.0;
  HullSolverOptions solver;
};

struct Theorem1Row {
  double delta = 0.0;
  double hull = 0.0;
  double hull_se = 0.0;
  double bound = 0.0;
  double bound_se = 0.0;  // 2 * se of omega(F, eps*)
  double argmin_eps = 0.0;
  std::size_t covering = 0;
  double combined_se = 0.0;
  bool violation = false;
};

struct Theorem1Report {
  std::string label;
  std::vector<Theorem1Row> rows;
  std::size_t violations = 0;
  std::size_t solver_warnings = 0;
};

/// Checks omega(conv F, delta) <= inf_eps 2 omega(F, eps) + delta sqrt(N(F, eps))
/// on every delta, up to `sigmas` combined standard errors.
Theorem1Report run_theorem1_verification(const SampledClass& cls, const Theorem1Config& config);
CsvTable theorem1_table(const Theorem1Report& report, const Theorem1Config& config);

/// psi_theorem1 for a sampled class with MC modulus and greedy covering on
/// auto_eps_grid, and the zero-error rate r_hat it induces.
struct ZeroErrorRate {
  FixedPointResult r_hat;
  double argmin_eps = 0.0;
};
ZeroErrorRate zero_error_rate(const SampledClass& cls, std::size_t draws, std::uint64_t seed,
                              std::size_t grid_points = 32);

struct ErmTrialConfig {
  std::size_t m = 20;  // interval indicator thresholds
  std::size_t n = 200;
  std::size_t trials = 200;
  double t = 3.0;
  std::size_t draws = 400;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  ConstantsProfile profile;
};

struct ErmTrialRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double train_objective = 0.0;
  double duality_gap = 0.0;
  double risk = 0.0;
  double r_hat = 0.0;
  double r0 = 0.0;
  double ratio = 0.0;  // risk / (r_hat + r0)
  double bound = 0.0;
  bool covered = false;
};

struct ErmTrialReport {
  std::vector<ErmTrialRow> rows;
  double coverage = 0.0;
  double max_train_objective = 0.0;
  double K = 1.0;
};

/// Interval-indicator class G, target g_0 a random point of conv(G), ERM on
/// the sample, exact risk under the uniform law, certificate K(r_hat + r_0).
ErmTrialReport run_erm_trials(const ErmTrialConfig& config);
/// Smallest K covering every trial: max of risk / (r_hat + r_0).
double calibrate_constant(const ErmTrialReport& report);
/// Recomputes bound and coverage with a new constant.
void apply_constant(ErmTrialReport& report, double K);
CsvTable erm_table(const ErmTrialReport& report, const ErmTrialConfig& config);

struct RhatSweepConfig {
  std::size_t dimension = 2;
  std::size_t m = 600;
  std::vector<std::size_t> n_values;
  std::size_t draws = 300;
  std::uint64_t seed = 1;
};

struct RhatSweepRow {
  std::size_t n = 0;
  double r_hat = 0.0;
  double argmin_eps = 0.0;
};

struct RhatSweepReport {
  std::vector<RhatSweepRow> rows;
  RateFit fit;
  double target = 0.0;  // -(2 + V) / (2 (1 + V))
};

/// r_hat_n for ball(V) classes sharing their latent points across n.
RhatSweepReport run_rhat_sweep(const RhatSweepConfig& config);

struct RateCurveConfig {
  std::vector<double> deltas;
  std::size_t draws = 2000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  RateCurve reference;
  bool hull = true;
};

struct RateCurveRow {
  double x = 0.0;
  double reference = 0.0;
  double measured = 0.0;
  double std_error = 0.0;
};

struct RateCurveReport {
  std::vector<RateCurveRow> rows;
  RateFit fit;
};

/// Measured modulus (hull or finite) against a closed-form reference.
RateCurveReport run_rate_curves(const SampledClass& cls, const RateCurveConfig& config);

/// Fit of log N(F, eps) against log(1/eps); the exponent is the covering slope.
RateFit covering_slope(const CoveringCurve& curve, std::size_t trim = 2);

struct ChainingCheck {
  std::vector<double> terms;     // 2^i omega(2^{1-i})
  std::vector<double> ratios;    // terms[i] / terms[i-1], infinite after a zero
  std::vector<double> bounds;    // (sum_{j <= k} terms[j])^2 for k = 0..k_max
  bool dominance = false;        // ratio >= 2 for every i >= 2
  int first_failure = -1;        // first level breaking dominance
  RateFit fit;                   // bounds / log^{2V/(2+V)}(2^k) against 1/eps = 2^k
  RateFit raw_fit;               // bounds against 2^k, log factor included
  double target_exponent = 0.0;  // 2V / (2 + V)
};

/// Chaining sum of the ex1 reference modulus on the dyadic grid.
ChainingCheck run_chaining_check(double V, int k_max);

}  // namespace hullmod

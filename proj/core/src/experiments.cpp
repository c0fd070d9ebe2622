#include "hullmod/experiments.hpp"

#include "hullmod/nets.hpp"
#include "hullmod/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hullmod {

namespace {

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

}  // namespace

RateFit fit_power_law(std::span<const double> x, std::span<const double> y, std::size_t trim) {
  if (x.size() != y.size()) throw std::invalid_argument("fit needs matching x and y");
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  if (order.size() < 2 * trim + 2) throw std::invalid_argument("too few points for a trimmed fit");
  std::vector<double> lx, ly;
  for (std::size_t k = trim; k + trim < order.size(); ++k) {
    const double xv = x[order[k]];
    const double yv = y[order[k]];
    if (!(xv > 0.0) || !(yv > 0.0)) throw std::invalid_argument("log-log fit needs positive values");
    lx.push_back(std::log(xv));
    ly.push_back(std::log(yv));
  }
  const double count = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / count;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit needs distinct x values");
  RateFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const double r = ly[k] - fit.intercept - fit.exponent * lx[k];
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / count);
  fit.x_min = std::exp(lx.front());
  fit.x_max = std::exp(lx.back());
  fit.points = lx.size();
  return fit;
}

std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

std::vector<double> auto_eps_grid(const EmpiricalGeometry& geometry, std::size_t count) {
  const double diam = geometry.diameter();
  const double finest = geometry.min_positive_distance();
  if (!(diam > 0.0)) return {1.0};
  return geometric_grid(diam, 0.5 * finest, std::max<std::size_t>(count, 2));
}

Theorem1Report run_theorem1_verification(const SampledClass& cls, const Theorem1Config& config) {
  if (config.deltas.empty()) throw std::invalid_argument("theorem 1 check needs a delta grid");
  const EmpiricalGeometry geometry(cls);
  const auto eps = config.eps_grid.empty() ? auto_eps_grid(geometry, 24) : config.eps_grid;

  const auto hull_samples =
      modulus_convex_hull_samples(cls, config.deltas, config.draws, config.seed, config.threads, config.solver);
  const auto hull = hull_samples.summarize();
  const auto finite = modulus_finite(cls, eps, config.draws, config.seed, config.threads);
  const auto covering = covering_curve(cls, geometry, eps);

  Theorem1Report report;
  report.label = cls.label();
  report.solver_warnings = hull_samples.solver_warnings;
  for (std::size_t j = 0; j < config.deltas.size(); ++j) {
    const auto b = theorem1_bound(finite, covering, config.deltas[j]);
    Theorem1Row row;
    row.delta = config.deltas[j];
    row.hull = hull.estimates[j];
    row.hull_se = hull.std_errors[j];
    row.bound = b.value;
    row.bound_se = 2.0 * b.modulus_std_error;
    row.argmin_eps = b.argmin_eps;
    row.covering = b.covering_size;
    row.combined_se = std::hypot(row.hull_se, row.bound_se);
    row.violation = row.hull - row.bound > config.sigmas * row.combined_se + 1e-12;
    if (row.violation) ++report.violations;
    report.rows.push_back(row);
  }
  return report;
}

CsvTable theorem1_table(const Theorem1Report& report, const Theorem1Config& config) {
  std::string canonical = "theorem1|" + report.label + "|" + fmt(config.draws) + "|" + fmt(config.sigmas);
  for (double d : config.deltas) canonical += "|" + fmt(d);
  const auto hash = config_hash(canonical);
  CsvTable table({"class", "delta", "hull_modulus", "hull_se", "bound", "bound_se", "argmin_eps", "covering",
                  "combined_se", "violation", "seed", "draws", "config_hash"});
  for (const auto& r : report.rows)
    table.add_row({report.label, fmt(r.delta), fmt(r.hull), fmt(r.hull_se), fmt(r.bound), fmt(r.bound_se),
                   fmt(r.argmin_eps), fmt(r.covering), fmt(r.combined_se), r.violation ? "1" : "0",
                   std::to_string(config.seed), fmt(config.draws), hash});
  return table;
}

ZeroErrorRate zero_error_rate(const SampledClass& cls, std::size_t draws, std::uint64_t seed,
                              std::size_t grid_points) {
  const EmpiricalGeometry geometry(cls);
  const auto eps = auto_eps_grid(geometry, grid_points);
  auto modulus = modulus_finite(cls, eps, draws, seed);
  auto covering = covering_curve(cls, geometry, eps);
  const auto psi = make_psi_theorem1(modulus, covering, cls.sample_size());
  ZeroErrorRate out;
  out.r_hat = solve_zero_error(psi);
  const double delta = std::sqrt(out.r_hat.value);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < eps.size(); ++j) {
    const double v = modulus.estimates[j] + delta * std::sqrt(static_cast<double>(covering.sizes[j]));
    if (v < best) {
      best = v;
      out.argmin_eps = eps[j];
    }
  }
  return out;
}

ErmTrialReport run_erm_trials(const ErmTrialConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("need at least one trial");
  const auto family = IntervalFamily::evenly_spaced(config.m);
  const double r0 = r_zero(config.t, config.n);
  ErmTrialReport report;
  report.rows.resize(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t trial) {
    ErmTrialRow row;
    row.trial = trial;
    row.seed = draw_seed(config.seed, trial);
    const auto points = uniform_sample(config.n, row.seed);
    const auto cls = family.on_sample(points, "interval_indicators(m=" + std::to_string(config.m) + ")");

    std::mt19937_64 rng(draw_seed(row.seed, 7));
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> truth(config.m);
    for (auto& w : truth) w = expo(rng);
    const double total = std::accumulate(truth.begin(), truth.end(), 0.0);
    for (auto& w : truth) w /= total;
    const Eigen::VectorXd target = evaluate_combination(cls, ConvexCombination(truth));

    const auto erm = erm_convex_hull(cls, std::span<const double>(target.data(), static_cast<std::size_t>(target.size())));
    row.train_objective = erm.objective_value;
    row.duality_gap = erm.residual;
    row.risk = family.l1_distance(erm.combination.weights(), truth);
    row.r_hat = zero_error_rate(cls, config.draws, row.seed).r_hat.value;
    row.r0 = r0;
    row.ratio = row.risk / (row.r_hat + row.r0);
    report.rows[trial] = row;
  });
  for (const auto& r : report.rows) report.max_train_objective = std::max(report.max_train_objective, r.train_objective);
  apply_constant(report, config.profile.K_thm);
  return report;
}

double calibrate_constant(const ErmTrialReport& report) {
  double k = 0.0;
  for (const auto& r : report.rows) k = std::max(k, r.ratio);
  return std::max(k, std::numeric_limits<double>::min());
}

void apply_constant(ErmTrialReport& report, double K) {
  if (!(K > 0.0)) throw std::invalid_argument("K must be positive");
  report.K = K;
  std::size_t covered = 0;
  for (auto& r : report.rows) {
    r.bound = K * (r.r_hat + r.r0);
    r.covered = r.risk <= r.bound;
    covered += r.covered ? 1 : 0;
  }
  report.coverage = report.rows.empty() ? 0.0 : static_cast<double>(covered) / static_cast<double>(report.rows.size());
}

CsvTable erm_table(const ErmTrialReport& report, const ErmTrialConfig& config) {
  const auto hash = config_hash("erm|" + fmt(config.m) + "|" + fmt(config.n) + "|" + fmt(config.trials) + "|" +
                                fmt(config.t) + "|" + fmt(config.draws) + "|" + fmt(report.K));
  CsvTable table({"trial", "trial_seed", "train_objective", "duality_gap", "risk", "r_hat", "r0", "ratio", "K",
                  "bound", "covered", "seed", "draws", "config_hash"});
  for (const auto& r : report.rows)
    table.add_row({fmt(r.trial), std::to_string(r.seed), fmt(r.train_objective), fmt(r.duality_gap), fmt(r.risk),
                   fmt(r.r_hat), fmt(r.r0), fmt(r.ratio), fmt(report.K), fmt(r.bound), r.covered ? "1" : "0",
                   std::to_string(config.seed), fmt(config.draws), hash});
  return table;
}

RhatSweepReport run_rhat_sweep(const RhatSweepConfig& config) {
  if (config.n_values.size() < 6) throw std::invalid_argument("r_hat sweep needs at least six sample sizes");
  RhatSweepReport report;
  const double v = static_cast<double>(config.dimension);
  report.target = -(2.0 + v) / (2.0 * (1.0 + v));
  std::vector<double> xs, ys, adjusted;
  for (std::size_t n : config.n_values) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::ball;
    spec.dimension = config.dimension;
    spec.m = config.m;
    spec.n = n;
    spec.seed = config.seed;
    const auto cls = generate(spec);
    const auto rate = zero_error_rate(cls, config.draws, draw_seed(config.seed, n));
    report.rows.push_back({n, rate.r_hat.value, rate.argmin_eps});
    xs.push_back(static_cast<double>(n));
    ys.push_back(rate.r_hat.value);
  }
  report.fit = fit_power_law(xs, ys);
  return report;
}

RateCurveReport run_rate_curves(const SampledClass& cls, const RateCurveConfig& config) {
  const auto curve = config.hull
                         ? modulus_convex_hull(cls, config.deltas, config.draws, config.seed, config.threads)
                         : modulus_finite(cls, config.deltas, config.draws, config.seed, config.threads);
  RateCurveReport report;
  std::vector<double> xs, ys, adjusted;
  for (std::size_t j = 0; j < config.deltas.size(); ++j) {
    RateCurveRow row;
    row.x = config.deltas[j];
    try {
      row.reference = rate_reference(config.reference, row.x);
    } catch (const std::domain_error&) {
      row.reference = std::numeric_limits<double>::quiet_NaN();
    }
    row.measured = curve.estimates[j];
    row.std_error = curve.std_errors[j];
    report.rows.push_back(row);
    xs.push_back(row.x);
    ys.push_back(row.measured);
  }
  report.fit = fit_power_law(xs, ys);
  return report;
}

RateFit covering_slope(const CoveringCurve& curve, std::size_t trim) {
  std::vector<double> inv, sizes;
  for (std::size_t i = 0; i < curve.epsilons.size(); ++i) {
    inv.push_back(1.0 / curve.epsilons[i]);
    sizes.push_back(static_cast<double>(curve.sizes[i]));
  }
  return fit_power_law(inv, sizes, trim);
}

ChainingCheck run_chaining_check(double V, int k_max) {
  if (k_max < 8) throw std::invalid_argument("chaining check needs k_max >= 8");
  RateCurve reference;
  reference.kind = RateKind::ex1_poly_covering;
  reference.exponent = V;
  std::vector<double> knots;
  for (int i = 0; i <= k_max; ++i) knots.push_back(std::ldexp(1.0, 1 - i));
  const auto modulus = reference_modulus(reference, knots);

  ChainingCheck check;
  check.target_exponent = 2.0 * V / (2.0 + V);
  check.terms = chaining_terms(modulus, k_max);
  check.dominance = true;
  double sum = 0.0;
  std::vector<double> xs, ys, adjusted;
  for (int i = 0; i <= k_max; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    sum += check.terms[idx];
    check.bounds.push_back(sum * sum);
    if (i > 0) {
      const double prev = check.terms[idx - 1];
      check.ratios.push_back(prev > 0.0 ? check.terms[idx] / prev : std::numeric_limits<double>::infinity());
      if (i >= 2 && check.ratios.back() < 2.0 * (1.0 - 1e-12) && check.dominance) {
        check.dominance = false;
        check.first_failure = i;
      }
    }
    if (i >= 2) {
      xs.push_back(std::ldexp(1.0, i));
      ys.push_back(sum * sum);
      adjusted.push_back(sum * sum / std::pow(i * std::log(2.0), check.target_exponent));
    }
  }
  check.raw_fit = fit_power_law(xs, ys);
  check.fit = fit_power_law(xs, adjusted);
  return check;
}

}  // namespace hullmod

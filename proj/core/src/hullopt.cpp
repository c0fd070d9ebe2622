#include "hullmod/hullopt.hpp"

#include "hullmod/bounded_simplex.hpp"
#include "hullmod/nets.hpp"
#include "hullmod/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hullmod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pairwise conditional gradient for  max_{lambda, mu}  c^T w - tau w^T G w,
// w = lambda - mu, both on the probability simplex. Keeps G w, c^T w and
// w^T G w up to date with O(m) work per step.
class PairwiseState {
 public:
  PairwiseState(const Eigen::MatrixXd& gram, std::span<const double> c)
      : gram_(gram), c_(c), m_(c.size()), lambda_(m_, 0.0), mu_(m_, 0.0), gw_(m_, 0.0) {}

  void start_at(std::size_t i, std::size_t j) {
    std::fill(lambda_.begin(), lambda_.end(), 0.0);
    std::fill(mu_.begin(), mu_.end(), 0.0);
    lambda_[i] = 1.0;
    mu_[j] = 1.0;
    recompute();
  }

  void recompute() {
    for (std::size_t r = 0; r < m_; ++r) {
      double s = 0.0;
      for (std::size_t q = 0; q < m_; ++q) {
        const double w = lambda_[q] - mu_[q];
        if (w != 0.0) s += gram_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(q)) * w;
      }
      gw_[r] = s;
    }
    cw_ = 0.0;
    wgw_ = 0.0;
    for (std::size_t q = 0; q < m_; ++q) {
      const double w = lambda_[q] - mu_[q];
      cw_ += c_[q] * w;
      wgw_ += gw_[q] * w;
    }
    wgw_ = std::max(0.0, wgw_);
  }

  struct InnerOutcome {
    double objective = 0.0;  // c^T w - tau w^T G w at the iterate
    double gap = 0.0;        // Frank-Wolfe gap, bounds the suboptimality
    std::size_t iterations = 0;
    bool limit_hit = false;
  };

  InnerOutcome maximize(double tau, double gap_tolerance, std::size_t max_iterations) {
    InnerOutcome out;
    for (;;) {
      // gradient wrt lambda is g = c - 2 tau G w; wrt mu it is -g.
      std::size_t fw_lambda = 0, fw_mu = 0;
      double g_max = -kInf, g_min = kInf;
      std::size_t away_lambda = m_, away_mu = m_;
      double away_lambda_g = kInf, away_mu_g = -kInf;
      double g_dot_lambda = 0.0, g_dot_mu = 0.0;
      for (std::size_t q = 0; q < m_; ++q) {
        const double g = c_[q] - 2.0 * tau * gw_[q];
        if (g > g_max) g_max = g, fw_lambda = q;
        if (g < g_min) g_min = g, fw_mu = q;
        if (lambda_[q] > 0.0) {
          g_dot_lambda += g * lambda_[q];
          if (g < away_lambda_g) away_lambda_g = g, away_lambda = q;
        }
        if (mu_[q] > 0.0) {
          g_dot_mu += g * mu_[q];
          if (g > away_mu_g) away_mu_g = g, away_mu = q;
        }
      }
      out.objective = cw_ - tau * wgw_;
      out.gap = std::max(0.0, (g_max - g_dot_lambda) + (g_dot_mu - g_min));
      if (out.gap <= gap_tolerance) break;
      if (out.iterations >= max_iterations) {
        out.limit_hit = true;
        break;
      }
      ++out.iterations;
      if (out.iterations % 256 == 0) recompute();

      // Pairwise direction on the block with the larger pairwise gap; in
      // terms of w both are a move along e_p - e_q.
      const double gap_lambda = g_max - away_lambda_g;
      const double gap_mu = away_mu_g - g_min;
      std::size_t p, q;
      double t_max;
      bool on_lambda = gap_lambda >= gap_mu;
      if (on_lambda) {
        p = fw_lambda, q = away_lambda, t_max = lambda_[away_lambda];
      } else {
        p = away_mu, q = fw_mu, t_max = mu_[away_mu];
      }
      if (p == q) break;
      const double slope = on_lambda ? gap_lambda : gap_mu;
      const auto pi = static_cast<Eigen::Index>(p);
      const auto qi = static_cast<Eigen::Index>(q);
      const double curvature = std::max(0.0, gram_(pi, pi) + gram_(qi, qi) - 2.0 * gram_(pi, qi));
      double t = t_max;
      if (curvature > 0.0) t = std::min(t_max, slope / (2.0 * tau * curvature));
      if (!(t > 0.0)) break;

      if (on_lambda) {
        lambda_[p] += t;
        lambda_[q] -= t;
        if (t == t_max) lambda_[q] = 0.0;
      } else {
        mu_[q] += t;
        mu_[p] -= t;
        if (t == t_max) mu_[p] = 0.0;
      }
      cw_ += t * (c_[p] - c_[q]);
      wgw_ = std::max(0.0, wgw_ + 2.0 * t * (gw_[p] - gw_[q]) + t * t * curvature);
      for (std::size_t r = 0; r < m_; ++r) {
        const auto ri = static_cast<Eigen::Index>(r);
        gw_[r] += t * (gram_(ri, pi) - gram_(ri, qi));
      }
    }
    return out;
  }

  double linear_value() const { return cw_; }
  double norm() const { return std::sqrt(wgw_); }

  struct Snapshot {
    std::vector<double> w;
    std::vector<double> gw;
    double cw = 0.0;
    double wgw = 0.0;
  };

  Snapshot snapshot() const {
    Snapshot s{std::vector<double>(m_), gw_, cw_, wgw_};
    for (std::size_t q = 0; q < m_; ++q) s.w[q] = lambda_[q] - mu_[q];
    return s;
  }

 private:
  const Eigen::MatrixXd& gram_;
  std::span<const double> c_;
  std::size_t m_;
  std::vector<double> lambda_;
  std::vector<double> mu_;
  std::vector<double> gw_;
  double cw_ = 0.0;
  double wgw_ = 0.0;
};

// Best value on the segment between an iterate outside the norm ball and one
// inside it; the segment stays in the difference body.
double mixed_lower(const PairwiseState::Snapshot& out, const PairwiseState::Snapshot& in, double delta) {
  double cross = 0.0;
  for (std::size_t q = 0; q < out.w.size(); ++q) cross += out.w[q] * in.gw[q];
  const double a = std::max(0.0, out.wgw - 2.0 * cross + in.wgw);
  const double b = cross - in.wgw;
  const double c = in.wgw - delta * delta;
  double theta = 0.0;
  if (a > 0.0) {
    theta = (-b + std::sqrt(std::max(0.0, b * b - a * c))) / a;
  } else if (b > 0.0) {
    theta = -c / (2.0 * b);
  }
  theta = std::clamp(theta, 0.0, 1.0);
  // Guard against rounding: confirm the mixed point is within the ball.
  for (int k = 0; k < 60; ++k) {
    if (theta * theta * a + 2.0 * theta * b + c <= 0.0) break;
    theta *= 0.999;
  }
  return theta * out.cw + (1.0 - theta) * in.cw;
}

SampledClass distinct_rows(const SampledClass& cls) {
  const auto order = lexicographic_order(cls);
  const auto& a = cls.values();
  std::vector<Eigen::Index> keep{static_cast<Eigen::Index>(order.front())};
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(order[k]);
    if (a.row(row) != a.row(keep.back())) keep.push_back(row);
  }
  if (keep.size() == cls.num_functions()) return cls;
  std::sort(keep.begin(), keep.end());
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(keep.size()), a.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) rows.row(static_cast<Eigen::Index>(k)) = a.row(keep[k]);
  return SampledClass(std::move(rows), cls.label(), cls.range_checked());
}

void require_nonnegative_delta(double delta) {
  if (!(delta >= 0.0) || std::isnan(delta)) throw std::invalid_argument("delta must be nonnegative");
}

}  // namespace

HullPairSolver::HullPairSolver(const EmpiricalGeometry& geometry, HullSolverOptions options)
    : geometry_(geometry), options_(options), diameter_(geometry.diameter()) {}

HullSupResult HullPairSolver::solve(std::span<const double> c, double delta) const {
  require_nonnegative_delta(delta);
  const std::size_t m = geometry_.size();
  if (c.size() != m) throw std::invalid_argument("functional needs one value per row");

  HullSupResult result;
  const auto hi = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
  const auto lo = static_cast<std::size_t>(std::min_element(c.begin(), c.end()) - c.begin());
  const double spread = c[hi] - c[lo];
  if (m == 1 || spread <= 0.0) {
    result.vertex_attained = true;
    return result;
  }
  const double pair_distance = geometry_.distance(hi, lo);
  if (delta >= diameter_ || pair_distance <= delta) {
    result.value = result.upper = spread;
    result.vertex_attained = true;
    return result;
  }
  if (delta == 0.0) return result;

  PairwiseState state(geometry_.gram(), c);
  state.start_at(hi, lo);

  // Shrinking the best vertex pair to norm delta is feasible because 0 lies
  // in the difference body.
  double lower = spread * delta / pair_distance;
  double upper = spread;
  const double tol = options_.relative_tolerance;

  double tau = spread / (2.0 * delta * pair_distance);
  double tau_lo = 0.0;   // norm(h(tau)) > delta
  double tau_hi = kInf;  // norm(h(tau)) <= delta
  PairwiseState::Snapshot outside, inside;
  const double exact_gap = 0.25 * tol;
  bool closed = false;
  for (std::size_t step = 0; step < options_.max_multiplier_steps && !closed; ++step) {
    ++result.multiplier_steps;
    // Solve loosely first; an inexact maximizer with gap g lies within
    // sqrt(g / tau) of the exact one in norm, which decides the bracket side
    // whenever the norm is farther than that from delta.
    double gap_tolerance = std::max(exact_gap * lower, 0.05 * (upper - lower));
    double norm = 0.0;
    for (;;) {
      const auto inner = state.maximize(tau, gap_tolerance, options_.max_inner_iterations);
      result.inner_iterations += inner.iterations;
      result.inner_limit_hit = result.inner_limit_hit || inner.limit_hit;
      upper = std::min(upper, inner.objective + inner.gap + tau * delta * delta);
      norm = state.norm();
      const double linear = state.linear_value();
      if (linear > 0.0) lower = std::max(lower, norm <= delta ? linear : linear * delta / norm);
      if (upper - lower <= tol * upper) {
        closed = true;
        break;
      }
      const bool exact = gap_tolerance <= exact_gap * lower;
      if (exact || inner.limit_hit || std::abs(norm - delta) > std::sqrt(inner.gap / tau)) break;
      gap_tolerance = std::max(exact_gap * lower, 0.01 * inner.gap);
    }
    if (norm > delta) {
      tau_lo = tau;
      outside = state.snapshot();
    } else {
      tau_hi = tau;
      inside = state.snapshot();
    }
    if (!outside.w.empty() && !inside.w.empty()) lower = std::max(lower, mixed_lower(outside, inside, delta));
    if (closed || upper - lower <= tol * upper) break;

    if (std::isinf(tau_hi))
      tau *= 4.0;
    else if (tau_lo == 0.0)
      tau /= 4.0;
    else
      tau = std::sqrt(tau_lo * tau_hi);
  }

  result.value = lower;
  result.upper = upper;
  if (upper - lower > tol * upper) {
    std::ostringstream msg;
    msg << "hull supremum did not converge: bracket [" << lower << ", " << upper << "] at delta " << delta;
    throw HullSolverError(msg.str(), lower, upper);
  }
  return result;
}

HullSupResult hull_pair_sup(const SampledClass& cls, std::span<const double> z, double delta,
                            HullSolverOptions options) {
  const EmpiricalGeometry geometry(cls);
  const Eigen::VectorXd c = process_values(cls, ProcessKind::gaussian, z);
  return HullPairSolver(geometry, options).solve(std::span<const double>(c.data(), static_cast<std::size_t>(c.size())), delta);
}

double simplex_bruteforce_sup_values(const EmpiricalGeometry& geometry, std::span<const double> c, double delta,
                                     double step) {
  require_nonnegative_delta(delta);
  const std::size_t m = geometry.size();
  if (m > 4) throw std::invalid_argument("brute-force simplex search is limited to m <= 4");
  if (!(step > 0.0) || step > 0.1) throw std::invalid_argument("grid step must lie in (0, 0.1]");
  if (c.size() != m) throw std::invalid_argument("functional needs one value per row");
  const auto divisions = static_cast<int>(std::lround(1.0 / step));

  // All weight vectors with entries in {0, 1/K, ..., 1} summing to one.
  std::vector<std::array<double, 4>> points;
  std::array<int, 4> counts{};
  auto emit = [&](auto&& self, std::size_t slot, int remaining) -> void {
    if (slot + 1 == m) {
      counts[slot] = remaining;
      std::array<double, 4> w{};
      for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<double>(counts[i]) / divisions;
      points.push_back(w);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      counts[slot] = k;
      self(self, slot + 1, remaining - k);
    }
  };
  emit(emit, 0, divisions);

  std::vector<double> value(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += c[i] * points[p][i];
    value[p] = s;
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return value[a] > value[b]; });

  const auto& gram = geometry.gram();
  const double delta2 = delta * delta;
  double best = 0.0;  // lambda = mu is always feasible
  // lambda in decreasing objective, mu in increasing objective; the first
  // feasible mu for a given lambda is the best partner for it.
  for (std::size_t a = 0; a < order.size(); ++a) {
    const auto& lam = points[order[a]];
    const double vl = value[order[a]];
    if (vl - value[order.back()] <= best) break;
    for (std::size_t b = order.size(); b-- > 0;) {
      const double gain = vl - value[order[b]];
      if (gain <= best) break;
      const auto& mu = points[order[b]];
      double q = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double wi = lam[i] - mu[i];
        if (wi == 0.0) continue;
        for (std::size_t j = 0; j < m; ++j)
          q += wi * (lam[j] - mu[j]) * gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      if (q <= delta2) {
        best = gain;
        break;
      }
    }
  }
  return best;
}

double simplex_bruteforce_sup(const SampledClass& cls, std::span<const double> z, double delta, double step) {
  const EmpiricalGeometry geometry(cls);
  const Eigen::VectorXd c = process_values(cls, ProcessKind::gaussian, z);
  return simplex_bruteforce_sup_values(geometry, std::span<const double>(c.data(), static_cast<std::size_t>(c.size())),
                                       delta, step);
}

ModulusSamples modulus_convex_hull_samples(const SampledClass& cls, std::span<const double> delta_grid,
                                           std::size_t n_draws, std::uint64_t seed, unsigned threads,
                                           HullSolverOptions options) {
  if (n_draws < 1) throw std::invalid_argument("at least one Monte Carlo draw is required");
  for (double d : delta_grid) require_nonnegative_delta(d);
  // Rows that coincide on the sample span the same hull and carry the same
  // process values, so one copy of each suffices.
  const SampledClass reduced = distinct_rows(cls);
  const EmpiricalGeometry geometry(reduced);
  const HullPairSolver solver(geometry, options);

  ModulusSamples out;
  out.deltas.assign(delta_grid.begin(), delta_grid.end());
  out.seed = seed;
  out.suprema.resize(static_cast<Eigen::Index>(n_draws), static_cast<Eigen::Index>(delta_grid.size()));
  std::vector<unsigned char> limit_hit(n_draws, 0);

  parallel_for(n_draws, threads, [&](std::size_t k) {
    std::vector<double> noise(cls.sample_size());
    fill_noise(ProcessKind::gaussian, draw_seed(seed, k), noise);
    const Eigen::VectorXd w = process_values(reduced, ProcessKind::gaussian, noise);
    const std::span<const double> values(w.data(), static_cast<std::size_t>(w.size()));
    for (std::size_t j = 0; j < delta_grid.size(); ++j) {
      const auto r = solver.solve(values, delta_grid[j]);
      if (r.inner_limit_hit) limit_hit[k] = 1;
      out.suprema(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = r.value;
    }
  });
  out.solver_warnings = static_cast<std::size_t>(std::count(limit_hit.begin(), limit_hit.end(), 1));
  return out;
}

ModulusCurve modulus_convex_hull(const SampledClass& cls, std::span<const double> delta_grid, std::size_t n_draws,
                                 std::uint64_t seed, unsigned threads, HullSolverOptions options) {
  return modulus_convex_hull_samples(cls, delta_grid, n_draws, seed, threads, options).summarize();
}

CappedSimplexLp solve_capped_simplex_lp(std::span<const double> v, std::span<const double> p, double r) {
  if (v.size() != p.size() || v.empty()) throw std::invalid_argument("LP data must be nonempty and aligned");
  const std::size_t m = v.size();
  CappedSimplexLp out;
  // The optimum is a basic solution: a single vertex under the cap, or a
  // mixture of a vertex under the cap with one above it, placed on the cap.
  double best = -kInf;
  double best_slope = 0.0;
  std::size_t best_vertex = m;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(p[i] <= r)) continue;
    out.feasible = true;
    if (v[i] > best) best = v[i], best_slope = 0.0, best_vertex = i;
    for (std::size_t j = 0; j < m; ++j) {
      if (!(p[j] > r) || !(v[j] > v[i])) continue;
      const double slope = (v[j] - v[i]) / (p[j] - p[i]);
      const double mixed = v[i] + slope * (r - p[i]);
      if (mixed > best) best = mixed, best_slope = slope, best_vertex = m;
    }
  }
  if (!out.feasible) return out;
  out.value = best;

  // Dual: min_{s >= 0} max_i (v_i - s p_i) + s r.
  auto dual = [&](double s) {
    double worst = -kInf;
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, v[i] - s * p[i]);
    return worst + s * r;
  };
  double certificate = dual(best_slope);
  if (best_vertex < m) {
    double steepest = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (p[j] > p[best_vertex]) steepest = std::max(steepest, (v[j] - v[best_vertex]) / (p[j] - p[best_vertex]));
    certificate = std::min({certificate, dual(0.0), dual(steepest)});
  }
  out.dual_value = certificate;
  const double scale = std::max(1.0, std::abs(best));
  if (certificate - best > 1e-9 * scale || best - certificate > 1e-9 * scale) {
    std::ostringstream msg;
    msg << "capped simplex LP certificate failed: primal " << best << ", dual " << certificate;
    throw std::runtime_error(msg.str());
  }
  return out;
}

namespace {

double localized_hull_sup(std::span<const double> rn, std::span<const double> means, double r,
                          std::vector<double>& scratch) {
  const auto plus = solve_capped_simplex_lp(rn, means, r);
  if (!plus.feasible) return 0.0;
  scratch.resize(rn.size());
  for (std::size_t i = 0; i < rn.size(); ++i) scratch[i] = -rn[i];
  const auto minus = solve_capped_simplex_lp(scratch, means, r);
  return std::max({plus.value, minus.value, 0.0});
}

}  // namespace

MeanEstimate hull_localized_rademacher(const SampledClass& cls, double r, std::size_t n_draws, std::uint64_t seed,
                                       unsigned threads) {
  if (n_draws < 1) throw std::invalid_argument("at least one Monte Carlo draw is required");
  if (!cls.range_checked()) throw std::invalid_argument("localized Rademacher complexity needs a range-checked class");
  if (!(r >= 0.0)) throw std::invalid_argument("localization radius must be nonnegative");
  const Eigen::VectorXd means = cls.row_means();
  const std::span<const double> mean_span(means.data(), static_cast<std::size_t>(means.size()));
  std::vector<double> per_draw(n_draws, 0.0);
  parallel_for(n_draws, threads, [&](std::size_t k) {
    std::vector<double> noise(cls.sample_size());
    fill_noise(ProcessKind::rademacher, draw_seed(seed, k), noise);
    const Eigen::VectorXd rn = process_values(cls, ProcessKind::rademacher, noise);
    std::vector<double> scratch;
    per_draw[k] = localized_hull_sup(std::span<const double>(rn.data(), static_cast<std::size_t>(rn.size())),
                                     mean_span, r, scratch);
  });
  return mean_with_error(per_draw);
}

FrozenHullRademacher::FrozenHullRademacher(const SampledClass& cls, std::size_t n_draws, std::uint64_t seed) {
  if (n_draws < 1) throw std::invalid_argument("at least one Monte Carlo draw is required");
  if (!cls.range_checked()) throw std::invalid_argument("localized Rademacher complexity needs a range-checked class");
  const Eigen::VectorXd means = cls.row_means();
  means_.assign(means.data(), means.data() + means.size());
  rademacher_.resize(static_cast<Eigen::Index>(n_draws), means.size());
  std::vector<double> noise(cls.sample_size());
  for (std::size_t k = 0; k < n_draws; ++k) {
    fill_noise(ProcessKind::rademacher, draw_seed(seed, k), noise);
    rademacher_.row(static_cast<Eigen::Index>(k)) = process_values(cls, ProcessKind::rademacher, noise).transpose();
  }
}

MeanEstimate FrozenHullRademacher::operator()(double r) const {
  if (!(r >= 0.0)) throw std::invalid_argument("localization radius must be nonnegative");
  std::vector<double> per_draw(static_cast<std::size_t>(rademacher_.rows()), 0.0);
  std::vector<double> row(means_.size());
  std::vector<double> scratch;
  for (Eigen::Index k = 0; k < rademacher_.rows(); ++k) {
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = rademacher_(k, static_cast<Eigen::Index>(i));
    per_draw[static_cast<std::size_t>(k)] = localized_hull_sup(row, means_, r, scratch);
  }
  return mean_with_error(per_draw);
}

ErmSolution erm_convex_hull(const SampledClass& cls, std::span<const double> target) {
  const std::size_t m = cls.num_functions();
  const std::size_t n = cls.sample_size();
  if (target.size() != n) throw std::invalid_argument("target length must equal the sample size");
  if (!cls.range_checked()) throw std::invalid_argument("ERM over the hull needs a range-checked class");
  for (double y : target)
    if (!(y >= 0.0 && y <= 1.0)) throw std::invalid_argument("target values must lie in [0,1]");

  // Dual of the least-absolute-deviation problem over the simplex:
  //   max  S - y^T u   s.t.  S - (A u)_i + sigma_i = 0,  -1 <= u <= 1,  sigma >= 0.
  // The row duals are the optimal convex weights.
  const auto& a = cls.values();
  const auto rows = static_cast<Eigen::Index>(m);
  const auto nu = static_cast<Eigen::Index>(n);
  LinearProgram lp;
  lp.constraints = Eigen::MatrixXd::Zero(rows, nu + 1 + rows);
  lp.constraints.leftCols(nu) = -a;
  lp.constraints.col(nu).setOnes();
  lp.constraints.rightCols(rows).setIdentity();
  lp.rhs = Eigen::VectorXd::Zero(rows);
  lp.objective = Eigen::VectorXd::Zero(nu + 1 + rows);
  Eigen::Map<const Eigen::VectorXd> y(target.data(), nu);
  lp.objective.head(nu) = -y;
  lp.objective[nu] = 1.0;
  lp.lower = Eigen::VectorXd::Constant(nu + 1 + rows, 0.0);
  lp.upper = Eigen::VectorXd::Constant(nu + 1 + rows, kInf);
  lp.lower.head(nu).setConstant(-1.0);
  lp.upper.head(nu).setConstant(1.0);
  lp.lower[nu] = -kInf;

  // Start with u at +1 where the target sits below the mean row value.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nu + 1 + rows);
  const Eigen::VectorXd centre = a.colwise().mean().transpose();
  for (Eigen::Index k = 0; k < nu; ++k) x[k] = centre[k] > y[k] ? 1.0 : -1.0;
  const Eigen::VectorXd au = a * x.head(nu);
  Eigen::Index tight = 0;
  au.minCoeff(&tight);
  std::vector<std::size_t> basis;
  for (Eigen::Index i = 0; i < rows; ++i)
    basis.push_back(i == tight ? static_cast<std::size_t>(nu) : static_cast<std::size_t>(nu + 1 + i));

  const auto solved = solve_bounded_simplex(lp, basis, x);
  if (solved.status != SimplexStatus::optimal) throw std::runtime_error("ERM linear program did not reach optimality");

  std::vector<double> weights(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) total += (weights[i] = std::max(0.0, solved.duals[static_cast<Eigen::Index>(i)]));
  if (!(total > 0.0)) throw std::runtime_error("ERM linear program returned degenerate weights");
  for (double& w : weights) w /= total;

  ErmSolution out{ConvexCombination(weights), 0.0, solved.iterations, 0.0};
  const Eigen::VectorXd fitted = evaluate_combination(cls, out.combination);
  out.objective_value = (fitted - y).cwiseAbs().mean();

  // Lower bound from the dual point u.
  Eigen::VectorXd u = solved.x.head(nu).cwiseMax(-1.0).cwiseMin(1.0);
  const double dual_bound = ((a * u).minCoeff() - y.dot(u)) / static_cast<double>(n);
  out.residual = std::max(0.0, out.objective_value - dual_bound);
  if (out.residual > 1e-8) {
    std::ostringstream msg;
    msg << "ERM duality gap " << out.residual << " exceeds 1e-8";
    throw std::runtime_error(msg.str());
  }
  return out;
}

}  // namespace hullmod

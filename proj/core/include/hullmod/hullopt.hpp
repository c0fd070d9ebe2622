#pragma once

#include "hullmod/classdata.hpp"
#include "hullmod/process.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hullmod {

struct HullSolverOptions {
  double relative_tolerance = 1e-6;  // certified (upper - lower) <= tol * upper
  std::size_t max_inner_iterations = 10000;
  std::size_t max_multiplier_steps = 200;
};

/// Certified value of sup <z, h> over h in conv(F) - conv(F), ||h|| <= delta.
struct HullSupResult {
  double value = 0.0;  // feasible (lower) value
  double upper = 0.0;  // dual upper bound
  std::size_t inner_iterations = 0;
  std::size_t multiplier_steps = 0;
  bool vertex_attained = false;  // closed-form vertex answer, no iteration
  bool inner_limit_hit = false;  // some inner solve stopped at max_inner_iterations
};

/// The bracket could not be closed within the iteration budgets.
class HullSolverError : public std::runtime_error {
 public:
  HullSolverError(const std::string& what, double lower, double upper)
      : std::runtime_error(what), lower_(lower), upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

/// Suprema of a linear functional over the norm-localized difference body
/// {A^T(lambda - mu) : lambda, mu in the simplex, ||A^T(lambda - mu)|| <= delta}.
///
/// The functional is given by its values on the rows (for the Gaussian
/// process these are W(f_i)). When the best vertex pair is within delta the
/// vertex formula max_i c_i - min_j c_j is returned exactly. Otherwise the
/// norm constraint is dualized with a multiplier tau >= 0, each inner problem
///   max_w  c^T w - tau ||A^T w||^2
/// is solved by pairwise conditional gradient on the two simplices (the
/// linear-minimization oracle is a vertex of each simplex), and tau is
/// bisected in log scale until the primal-dual bracket closes.
class HullPairSolver {
 public:
  explicit HullPairSolver(const EmpiricalGeometry& geometry, HullSolverOptions options = {});

  HullSupResult solve(std::span<const double> vertex_values, double delta) const;

  const EmpiricalGeometry& geometry() const { return geometry_; }

 private:
  const EmpiricalGeometry& geometry_;
  HullSolverOptions options_;
  double diameter_;
};

/// hull supremum for the Gaussian functional with noise `z` (length n):
/// <z, h>_scaled = n^{-1/2} sum_k z_k h(x_k).
HullSupResult hull_pair_sup(const SampledClass& cls, std::span<const double> z, double delta,
                            HullSolverOptions options = {});

/// Exhaustive search over the grid {k * step} of both simplices; m <= 4.
/// Validation oracle for hull_pair_sup.
double simplex_bruteforce_sup(const SampledClass& cls, std::span<const double> z, double delta, double step);
double simplex_bruteforce_sup_values(const EmpiricalGeometry& geometry, std::span<const double> vertex_values,
                                     double delta, double step);

/// Monte Carlo omega(conv F, delta). Uses the same draw streams as
/// modulus_finite_samples, so the two are comparable path by path.
ModulusSamples modulus_convex_hull_samples(const SampledClass& cls, std::span<const double> delta_grid,
                                           std::size_t n_draws, std::uint64_t seed, unsigned threads = 1,
                                           HullSolverOptions options = {});

ModulusCurve modulus_convex_hull(const SampledClass& cls, std::span<const double> delta_grid, std::size_t n_draws,
                                 std::uint64_t seed, unsigned threads = 1, HullSolverOptions options = {});

/// Exact value of max over lambda in the simplex with p^T lambda <= r of
/// v^T lambda, with its dual certificate. `feasible` is false when every
/// p_i exceeds r.
struct CappedSimplexLp {
  bool feasible = false;
  double value = 0.0;
  double dual_value = 0.0;
};
CappedSimplexLp solve_capped_simplex_lp(std::span<const double> v, std::span<const double> p, double r);

/// E sup over g in conv(G) with P_n g <= r of |R_n(g)|; empty localization
/// counts as 0. Each sign draw solves both signed LPs exactly.
MeanEstimate hull_localized_rademacher(const SampledClass& cls, double r, std::size_t n_draws, std::uint64_t seed,
                                       unsigned threads = 1);

/// hull_localized_rademacher with frozen sign draws.
class FrozenHullRademacher {
 public:
  FrozenHullRademacher(const SampledClass& cls, std::size_t n_draws, std::uint64_t seed);

  MeanEstimate operator()(double r) const;

 private:
  std::vector<double> means_;
  Eigen::MatrixXd rademacher_;  // draws x m, R_n(g_i)
};

struct ErmSolution {
  ConvexCombination combination;
  double objective_value = 0.0;  // P_n |g - y|
  std::size_t iterations = 0;
  double residual = 0.0;  // certified duality gap
};

/// argmin over conv(G) of P_n |g - y|, solved as a linear program with a
/// duality-gap certificate of at most 1e-8.
ErmSolution erm_convex_hull(const SampledClass& cls, std::span<const double> target);

}  // namespace hullmod

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace hullmod {

/// maximize c^T x  subject to  A x = b,  lower <= x <= upper.
/// Infinite bounds are allowed; a variable with both bounds infinite is free.
struct LinearProgram {
  Eigen::MatrixXd constraints;  // A, rows x columns
  Eigen::VectorXd rhs;          // b
  Eigen::VectorXd objective;    // c
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

enum class SimplexStatus { optimal, unbounded, iteration_limit };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::iteration_limit;
  Eigen::VectorXd x;
  Eigen::VectorXd duals;  // pi = c_B^T B^{-1}, one per row
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  std::size_t max_iterations = 200000;
  double reduced_cost_tolerance = 1e-11;
  double pivot_tolerance = 1e-9;
  std::size_t refactor_interval = 64;
  std::size_t degenerate_streak_for_bland = 40;
};

/// Bounded-variable revised primal simplex with a dense basis inverse.
///
/// `start_basis` lists one column per row and must be nonsingular; `start_x`
/// gives the nonbasic values, each at one of its finite bounds (or 0 when
/// free). Basic values are recomputed from the equality constraints and must
/// respect their bounds. Dantzig pricing, switching to Bland's rule after a
/// streak of degenerate pivots.
SimplexResult solve_bounded_simplex(const LinearProgram& lp, const std::vector<std::size_t>& start_basis,
                                    const Eigen::VectorXd& start_x, const SimplexOptions& options = {});

}  // namespace hullmod

#include "hullmod/bounded_simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hullmod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class NonbasicState { at_lower, at_upper, free_zero, basic };

}  // namespace

SimplexResult solve_bounded_simplex(const LinearProgram& lp, const std::vector<std::size_t>& start_basis,
                                    const Eigen::VectorXd& start_x, const SimplexOptions& options) {
  const auto& a = lp.constraints;
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  if (lp.rhs.size() != rows || lp.objective.size() != cols || lp.lower.size() != cols || lp.upper.size() != cols ||
      start_x.size() != cols || static_cast<Eigen::Index>(start_basis.size()) != rows) {
    throw std::invalid_argument("linear program dimensions are inconsistent");
  }

  Eigen::VectorXd x = start_x;
  std::vector<NonbasicState> state(static_cast<std::size_t>(cols));
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double l = lp.lower[j];
    const double u = lp.upper[j];
    if (std::isinf(l) && std::isinf(u)) {
      state[static_cast<std::size_t>(j)] = NonbasicState::free_zero;
      x[j] = 0.0;
    } else if (!std::isinf(l) && x[j] == l) {
      state[static_cast<std::size_t>(j)] = NonbasicState::at_lower;
    } else if (!std::isinf(u) && x[j] == u) {
      state[static_cast<std::size_t>(j)] = NonbasicState::at_upper;
    } else {
      state[static_cast<std::size_t>(j)] = !std::isinf(l) ? NonbasicState::at_lower : NonbasicState::at_upper;
      x[j] = !std::isinf(l) ? l : u;
    }
  }
  std::vector<std::size_t> basis = start_basis;
  for (auto j : basis) state[j] = NonbasicState::basic;

  Eigen::MatrixXd basis_inverse(rows, rows);
  auto refactor = [&] {
    Eigen::MatrixXd b(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) b.col(i) = a.col(static_cast<Eigen::Index>(basis[static_cast<std::size_t>(i)]));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    if (!lu.isInvertible()) throw std::runtime_error("simplex basis became singular");
    basis_inverse = lu.inverse();
    Eigen::VectorXd residual = lp.rhs;
    for (Eigen::Index j = 0; j < cols; ++j)
      if (state[static_cast<std::size_t>(j)] != NonbasicState::basic && x[j] != 0.0) residual -= a.col(j) * x[j];
    const Eigen::VectorXd xb = basis_inverse * residual;
    for (Eigen::Index i = 0; i < rows; ++i) x[static_cast<Eigen::Index>(basis[static_cast<std::size_t>(i)])] = xb[i];
  };
  refactor();

  SimplexResult result;
  std::size_t since_refactor = 0;
  std::size_t degenerate_streak = 0;
  bool bland = false;
  Eigen::VectorXd cb(rows);
  Eigen::VectorXd pi(rows);
  Eigen::VectorXd reduced(cols);

  for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
    for (Eigen::Index i = 0; i < rows; ++i) cb[i] = lp.objective[static_cast<Eigen::Index>(basis[static_cast<std::size_t>(i)])];
    pi = basis_inverse.transpose() * cb;
    reduced = lp.objective - a.transpose() * pi;

    // Pricing.
    Eigen::Index entering = -1;
    double best_score = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto s = state[static_cast<std::size_t>(j)];
      if (s == NonbasicState::basic) continue;
      if (lp.lower[j] == lp.upper[j]) continue;
      const double d = reduced[j];
      const bool eligible = (s == NonbasicState::at_lower && d > options.reduced_cost_tolerance) ||
                            (s == NonbasicState::at_upper && d < -options.reduced_cost_tolerance) ||
                            (s == NonbasicState::free_zero && std::abs(d) > options.reduced_cost_tolerance);
      if (!eligible) continue;
      if (bland) {
        entering = j;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        entering = j;
      }
    }
    if (entering < 0) {
      result.status = SimplexStatus::optimal;
      break;
    }

    const double direction = reduced[entering] > 0.0 ? 1.0 : -1.0;
    const Eigen::VectorXd alpha = basis_inverse * a.col(entering);

    // Ratio test: x_B(theta) = x_B - direction * theta * alpha.
    double theta = kInf;
    Eigen::Index leaving = -1;
    bool leaving_to_upper = false;
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double rate = direction * alpha[i];
      if (std::abs(rate) <= options.pivot_tolerance) continue;
      const auto var = static_cast<Eigen::Index>(basis[static_cast<std::size_t>(i)]);
      double limit = kInf;
      bool to_upper = false;
      if (rate > 0.0 && !std::isinf(lp.lower[var])) {
        limit = std::max(0.0, (x[var] - lp.lower[var]) / rate);
      } else if (rate < 0.0 && !std::isinf(lp.upper[var])) {
        limit = std::max(0.0, (lp.upper[var] - x[var]) / -rate);
        to_upper = true;
      }
      if (std::isinf(limit)) continue;
      bool take = limit < theta;
      if (!take && limit == theta && leaving >= 0) {
        take = bland ? basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leaving)]
                     : std::abs(alpha[i]) > std::abs(alpha[leaving]);
      }
      if (take) {
        theta = limit;
        leaving = i;
        leaving_to_upper = to_upper;
      }
    }
    const double flip = lp.upper[entering] - lp.lower[entering];
    const bool bound_flip = !std::isinf(flip) && flip <= theta;
    if (bound_flip) theta = flip;
    if (std::isinf(theta)) {
      result.status = SimplexStatus::unbounded;
      break;
    }

    if (theta <= 1e-14) {
      if (++degenerate_streak >= options.degenerate_streak_for_bland) bland = true;
    } else {
      degenerate_streak = 0;
      bland = false;
    }

    for (Eigen::Index i = 0; i < rows; ++i)
      x[static_cast<Eigen::Index>(basis[static_cast<std::size_t>(i)])] -= direction * theta * alpha[i];
    x[entering] += direction * theta;

    if (bound_flip) {
      const bool now_upper = direction > 0.0;
      x[entering] = now_upper ? lp.upper[entering] : lp.lower[entering];
      state[static_cast<std::size_t>(entering)] = now_upper ? NonbasicState::at_upper : NonbasicState::at_lower;
      continue;
    }

    const auto out = static_cast<Eigen::Index>(basis[static_cast<std::size_t>(leaving)]);
    x[out] = leaving_to_upper ? lp.upper[out] : lp.lower[out];
    state[static_cast<std::size_t>(out)] = leaving_to_upper ? NonbasicState::at_upper : NonbasicState::at_lower;
    basis[static_cast<std::size_t>(leaving)] = static_cast<std::size_t>(entering);
    state[static_cast<std::size_t>(entering)] = NonbasicState::basic;

    const double pivot = alpha[leaving];
    basis_inverse.row(leaving) /= pivot;
    for (Eigen::Index i = 0; i < rows; ++i)
      if (i != leaving && alpha[i] != 0.0) basis_inverse.row(i) -= alpha[i] * basis_inverse.row(leaving);

    if (++since_refactor >= options.refactor_interval) {
      refactor();
      since_refactor = 0;
    }
  }

  refactor();
  for (Eigen::Index i = 0; i < rows; ++i) cb[i] = lp.objective[static_cast<Eigen::Index>(basis[static_cast<std::size_t>(i)])];
  result.duals = basis_inverse.transpose() * cb;
  result.x = x;
  result.objective = lp.objective.dot(x);
  return result;
}

}  // namespace hullmod

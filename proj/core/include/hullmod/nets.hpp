#pragma once

#include "hullmod/classdata.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hullmod {

/// Greedy epsilon-net of a sampled class.
///
/// The centers form a maximal radius-separated subset (pairwise distance
/// strictly greater than `radius`), hence also a radius-net: every row lies
/// within `radius` of its assigned center. The size therefore sits between
/// N(F, radius) and N(F, radius / 2).
struct EpsNet {
  double radius = 0.0;
  std::vector<std::size_t> center_indices;  // rows of the class, in insertion order
  std::vector<std::size_t> assignment;      // row -> covering center row

  std::size_t size() const { return center_indices.size(); }
};

/// epsilon -> reported covering number upper bound and its natural log.
struct CoveringCurve {
  std::vector<double> epsilons;    // strictly decreasing, positive
  std::vector<std::size_t> sizes;  // nondecreasing along the grid
  std::vector<double> entropies;   // log(sizes)
};

/// Farthest-first greedy net, seeded at the lexicographically smallest row,
/// ties broken by lowest index. Coverage uses <= radius, separation uses >.
EpsNet greedy_net(const SampledClass& cls, double eps);
EpsNet greedy_net(const SampledClass& cls, const EmpiricalGeometry& geometry, double eps);
EpsNet greedy_net(const SampledClass& cls, const RowCoordinates& coordinates, double eps);

/// Greedy net sizes on a strictly decreasing grid, stored as the running
/// maximum envelope so the curve is monotone.
CoveringCurve covering_curve(const SampledClass& cls, std::span<const double> eps_grid);
CoveringCurve covering_curve(const SampledClass& cls, const EmpiricalGeometry& geometry,
                             std::span<const double> eps_grid);
CoveringCurve covering_curve(const SampledClass& cls, const RowCoordinates& coordinates,
                             std::span<const double> eps_grid);

/// max over rows f of log |greedy_net(B(f, delta) ∩ F, eps)|.
double local_entropy(const SampledClass& cls, double delta, double eps);
double local_entropy(const SampledClass& cls, const EmpiricalGeometry& geometry, double delta, double eps);

/// Throws std::logic_error naming the first violated cover/separation pair.
void check_net_invariants(const EpsNet& net, const EmpiricalGeometry& geometry);
void check_net_invariants(const EpsNet& net, const RowCoordinates& coordinates);

/// `count` points from `start` down to `stop`, equally spaced in log scale.
std::vector<double> geometric_grid(double start, double stop, std::size_t count);
/// 2^{-first}, 2^{-first-1}, ..., 2^{-last}.
std::vector<double> dyadic_grid(int first, int last);
/// Parses "geometric:START:STOP:COUNT", "dyadic:FIRST:LAST" or a comma list.
std::vector<double> parse_grid(const std::string& text);

/// Rows of `cls` ordered lexicographically by their values; ties by index.
std::vector<std::size_t> lexicographic_order(const SampledClass& cls);

}  // namespace hullmod

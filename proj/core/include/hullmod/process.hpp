#pragma once

#include "hullmod/classdata.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hullmod {

enum class ProcessKind { gaussian, rademacher };

/// One realization of the isonormal Gaussian process or of the Rademacher
/// sums on a sampled class.
///
/// gaussian:   values[i] = n^{-1/2} sum_k noise[k] f_i(x_k), so that
///             E W(f) W(g) = <f, g>_{L2(P_n)}.
/// rademacher: values[i] = n^{-1} sum_k noise[k] f_i(x_k) = R_n(f_i).
struct ProcessDraw {
  ProcessKind kind = ProcessKind::gaussian;
  std::vector<double> noise;
  std::vector<double> values;
};

/// Monte Carlo estimate of delta -> omega(F, delta) (or of the hull modulus).
struct ModulusCurve {
  std::vector<double> deltas;
  std::vector<double> estimates;
  std::vector<double> std_errors;
  std::size_t n_draws = 0;
  std::uint64_t seed = 0;

  /// Value at the largest grid knot <= delta (previous-knot step function).
  /// Throws when delta lies below the smallest knot.
  double at(double delta) const;
  double std_error_at(double delta) const;
};

/// Per-draw suprema, one row per draw and one column per delta.
struct ModulusSamples {
  std::vector<double> deltas;
  Eigen::MatrixXd suprema;
  std::uint64_t seed = 0;
  std::size_t solver_warnings = 0;  // draws where an inner solve hit its iteration cap

  ModulusCurve summarize() const;
};

struct MeanEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Mean and standard error (sample standard deviation over sqrt(count)),
/// accumulated in index order.
MeanEstimate mean_with_error(std::span<const double> samples);

/// Fills `noise` with the noise of draw stream `stream_seed`: i.i.d. N(0,1)
/// or i.i.d. uniform signs.
void fill_noise(ProcessKind kind, std::uint64_t stream_seed, std::span<double> noise);

/// Deterministic in (cls, kind, seed).
ProcessDraw draw_process(const SampledClass& cls, ProcessKind kind, std::uint64_t seed);

/// Process values (scaled per kind) of every row for a given noise vector.
Eigen::VectorXd process_values(const SampledClass& cls, ProcessKind kind, std::span<const double> noise);

/// Pairs (i, j), i < j, ordered by distance, and the distances themselves.
class SortedPairs {
 public:
  explicit SortedPairs(const EmpiricalGeometry& geometry);

  std::size_t size() const { return first_.size(); }
  /// Number of pairs at distance <= delta.
  std::size_t count_within(double delta) const;

  std::span<const std::uint32_t> first() const { return first_; }
  std::span<const std::uint32_t> second() const { return second_; }
  std::span<const double> distances() const { return distance_; }

 private:
  std::vector<std::uint32_t> first_;
  std::vector<std::uint32_t> second_;
  std::vector<double> distance_;
};

/// Per-draw sup over pairs with ||f - g|| <= delta of |W(f) - W(g)| for every
/// delta in the grid. Draw k uses stream draw_seed(seed, k).
ModulusSamples modulus_finite_samples(const SampledClass& cls, std::span<const double> delta_grid,
                                      std::size_t n_draws, std::uint64_t seed, unsigned threads = 1);

ModulusCurve modulus_finite(const SampledClass& cls, std::span<const double> delta_grid, std::size_t n_draws,
                            std::uint64_t seed, unsigned threads = 1);

/// E sup_{P_n f <= r} |R_n(f)| over the rows, with an empty localization
/// contributing 0. Requires a range-checked class and r >= 0.
MeanEstimate localized_rademacher_finite(const SampledClass& cls, double r, std::size_t n_draws,
                                         std::uint64_t seed, unsigned threads = 1);

/// localized_rademacher_finite with the sign draws frozen at construction,
/// so r -> estimate is a deterministic nondecreasing function. Used as the
/// complexity term inside fixed-point solves.
class FrozenFiniteRademacher {
 public:
  FrozenFiniteRademacher(const SampledClass& cls, std::size_t n_draws, std::uint64_t seed);

  MeanEstimate operator()(double r) const;

 private:
  std::vector<double> sorted_means_;  // P_n f in ascending order
  Eigen::MatrixXd prefix_max_;        // draws x m, running max of |R_n| in mean order
};

}  // namespace hullmod

#pragma once

#include "hullmod/classdata.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hullmod {

enum class GeneratorKind { two_point, segment, ball, interval_indicators, lattice_holder };

GeneratorKind parse_generator_kind(const std::string& name);
std::string to_string(GeneratorKind kind);

/// Synthetic class recipe. Fields a kind does not use are ignored.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::two_point;
  std::size_t n = 100;        // sample size
  std::uint64_t seed = 0;
  double distance = 1.0;      // two_point
  std::size_t dimension = 2;  // ball
  std::size_t m = 2;          // segment, ball, interval_indicators, lattice_holder
  double V = 1.0;             // lattice_holder
  std::size_t levels = 64;    // lattice_holder
  bool range_01 = true;       // ball: map into [0, 1]
};

/// Deterministic in the spec (including the seed).
///
///   two_point            f = 0, g = distance (constant functions)
///   segment              t * 1 for m evenly spaced t in [0, 1]
///   ball                 m uniform points of the unit ball of a d-dimensional
///                        subspace of L2(P_n); exactly orthonormal Walsh
///                        functions when n is a power of two, orthonormalized
///                        Gaussian vectors otherwise
///   interval_indicators  1[x <= t] on a sorted uniform sample, t = j / (m - 1)
///   lattice_holder       m reflected random walks on `levels` cells with
///                        increments (1/2) h^{1/V} U[-1, 1], h = 1 / levels
///
/// The ball's latent coefficients depend on the seed only, not on n, so an n
/// sweep sees the same points.
SampledClass generate(const GeneratorSpec& spec);

/// n sorted uniform points of [0, 1] for the given seed.
std::vector<double> uniform_sample(std::size_t n, std::uint64_t seed);

/// Indicators of [0, t_j] as functions on [0, 1] with the uniform law.
class IntervalFamily {
 public:
  explicit IntervalFamily(std::vector<double> thresholds);
  /// t_j = j / (m - 1), or {1/2} when m = 1.
  static IntervalFamily evenly_spaced(std::size_t m);

  std::size_t size() const { return thresholds_.size(); }
  const std::vector<double>& thresholds() const { return thresholds_; }

  SampledClass on_sample(std::span<const double> points, const std::string& label) const;
  /// Exact integral over [0, 1] of |sum_j (a_j - b_j) 1[x <= t_j]|.
  double l1_distance(std::span<const double> a, std::span<const double> b) const;

 private:
  std::vector<double> thresholds_;
};

}  // namespace hullmod

#include "hullmod/process.hpp"

#include "hullmod/parallel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hullmod;

namespace {

SampledClass two_point(double distance) {
  Eigen::MatrixXd v(2, 4);
  v.row(0).setZero();
  v.row(1).setConstant(distance);
  return SampledClass(v, "two_point");
}

SampledClass random_class(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd v(m, n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = u(rng);
  return SampledClass(v, "random", true);
}

}  // namespace

TEST(MeanWithError, MatchesHandComputation) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const auto e = mean_with_error(x);
  EXPECT_DOUBLE_EQ(e.estimate, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
}

TEST(Noise, RademacherSignsAndDeterminism) {
  std::vector<double> a(64), b(64);
  fill_noise(ProcessKind::rademacher, 7, a);
  fill_noise(ProcessKind::rademacher, 7, b);
  EXPECT_EQ(a, b);
  for (double s : a) EXPECT_TRUE(s == 1.0 || s == -1.0);
}

TEST(DrawSeeds, DistinctRunSeedsGiveDistinctStreams) {
  EXPECT_NE(draw_seed(1, 0), draw_seed(2, 0));
  EXPECT_NE(draw_seed(1, 1), draw_seed(2, 0));
  EXPECT_NE(draw_seed(1, 3), draw_seed(3, 1));
}

TEST(ProcessValues, ScalingPerKind) {
  const auto cls = random_class(3, 4, 1);
  const std::vector<double> noise{1.0, -1.0, 1.0, 1.0};
  const auto g = process_values(cls, ProcessKind::gaussian, noise);
  const auto r = process_values(cls, ProcessKind::rademacher, noise);
  for (Eigen::Index i = 0; i < 3; ++i) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < 4; ++k) s += noise[static_cast<std::size_t>(k)] * cls.values()(i, k);
    EXPECT_NEAR(g(i), s / 2.0, 1e-15);
    EXPECT_NEAR(r(i), s / 4.0, 1e-15);
  }
}

TEST(SortedPairs, CountsWithin) {
  const auto cls = random_class(6, 3, 2);
  const EmpiricalGeometry g(cls);
  const SortedPairs pairs(g);
  EXPECT_EQ(pairs.size(), 15u);
  EXPECT_TRUE(std::is_sorted(pairs.distances().begin(), pairs.distances().end()));
  EXPECT_EQ(pairs.count_within(g.diameter()), 15u);
  EXPECT_EQ(pairs.count_within(0.0), 0u);
}

TEST(ModulusFinite, TwoPointClosedForm) {
  // sup over the single pair at distance d is |W(g) - W(f)| ~ d |N(0,1)|.
  const auto cls = two_point(0.7);
  const std::vector<double> deltas{1.0, 0.7, 0.5};
  const auto curve = modulus_finite(cls, deltas, 40000, 5);
  const double expected = 0.7 * std::sqrt(2.0 / std::numbers::pi);
  EXPECT_NEAR(curve.estimates[0], expected, 4.0 * curve.std_errors[0]);
  EXPECT_EQ(curve.estimates[0], curve.estimates[1]);
  EXPECT_EQ(curve.estimates[2], 0.0);
}

TEST(ModulusFinite, DeterministicAcrossThreads) {
  const auto cls = random_class(12, 5, 3);
  const std::vector<double> deltas{0.5, 0.3, 0.1};
  const auto a = modulus_finite(cls, deltas, 300, 9, 1);
  const auto b = modulus_finite(cls, deltas, 300, 9, 3);
  EXPECT_EQ(a.estimates, b.estimates);
}

TEST(ModulusCurve, StepLookup) {
  ModulusCurve c;
  c.deltas = {1.0, 0.5};
  c.estimates = {2.0, 1.0};
  c.std_errors = {0.1, 0.05};
  EXPECT_EQ(c.at(0.7), 1.0);
  EXPECT_EQ(c.at(3.0), 2.0);
  EXPECT_THROW(c.at(0.1), std::out_of_range);
}

TEST(LocalizedRademacher, FrozenMatchesDirectAndIsMonotone) {
  const auto cls = random_class(10, 30, 4);
  const FrozenFiniteRademacher frozen(cls, 500, 21);
  double previous = 0.0;
  for (double r : {0.0, 0.3, 0.45, 0.5, 0.6, 1.0}) {
    const double v = frozen(r).estimate;
    EXPECT_GE(v, previous);
    previous = v;
    EXPECT_NEAR(v, localized_rademacher_finite(cls, r, 500, 21).estimate, 1e-12);
  }
  EXPECT_EQ(frozen(-0.0).estimate, 0.0);
}

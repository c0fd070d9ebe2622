#include "hullmod/complexity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace hullmod;

namespace {

ModulusCurve curve_of(std::vector<double> deltas, std::vector<double> estimates) {
  ModulusCurve c;
  c.deltas = std::move(deltas);
  c.estimates = std::move(estimates);
  c.std_errors.assign(c.deltas.size(), 0.0);
  return c;
}

CoveringCurve covering_of(std::vector<double> eps, std::vector<std::size_t> sizes) {
  CoveringCurve c;
  c.epsilons = std::move(eps);
  c.sizes = std::move(sizes);
  for (auto s : c.sizes) c.entropies.push_back(std::log(static_cast<double>(s)));
  return c;
}

}  // namespace

TEST(RateReference, WorkedExamples) {
  RateCurve ex1{RateKind::ex1_poly_covering, 2.0, 1.0};
  EXPECT_NEAR(rate_reference(ex1, std::exp(-1.0)), std::exp(-0.5), 1e-14);
  RateCurve veq2{RateKind::ex2_Veq2, 2.0, 1.0};
  EXPECT_NEAR(rate_reference(veq2, std::exp(-4.0)), 4.0, 1e-13);
  RateCurve big{RateKind::ex2_bigV, 4.0, 1.0};
  EXPECT_NEAR(rate_reference(big, 0.25), 4.0, 1e-14);
  RateCurve small{RateKind::ex2_smallV, 1.0, 2.0};
  EXPECT_NEAR(rate_reference(small, std::exp(-4.0)), 2.0 * std::pow(4.0, -0.5), 1e-14);
  RateCurve hull1{RateKind::hullentropy_ex1, 2.0, 1.0};
  EXPECT_NEAR(rate_reference(hull1, std::exp(-1.0)), std::exp(1.0), 1e-12);
}

TEST(RateReference, DomainAndNames) {
  RateCurve c{RateKind::ex1_poly_covering, 1.0, 1.0};
  EXPECT_THROW(rate_reference(c, 0.0), std::domain_error);
  EXPECT_THROW(rate_reference(c, 0.5), std::domain_error);
  EXPECT_NO_THROW(rate_reference(c, c.x_max));
  RateCurve wrong{RateKind::ex2_bigV, 1.0, 1.0};
  EXPECT_THROW(rate_reference(wrong, 0.1), std::domain_error);
  for (auto k : {RateKind::ex1_poly_covering, RateKind::ex2_smallV, RateKind::ex2_Veq2, RateKind::ex2_bigV,
                 RateKind::hullentropy_ex1, RateKind::hullentropy_ex2})
    EXPECT_EQ(parse_rate_kind(to_string(k)), k);
  EXPECT_THROW(parse_rate_kind("nope"), std::invalid_argument);
}

TEST(Theorem1Bound, HandComputedMinimum) {
  const auto mod = curve_of({1.0, 0.5, 0.25}, {2.0, 1.0, 0.5});
  const auto cov = covering_of({1.0, 0.5, 0.25}, {1, 4, 16});
  const auto b = theorem1_bound(mod, cov, 0.1);
  EXPECT_NEAR(b.value, 1.4, 1e-14);
  EXPECT_EQ(b.argmin_eps, 0.25);
  EXPECT_EQ(b.covering_size, 16u);
  // Large delta favors the coarse knot: 4 + 10 * 1 vs 2 + 10 * 2.
  EXPECT_NEAR(theorem1_bound(mod, cov, 10.0).value, 14.0, 1e-14);
}

TEST(Theorem1Bound, ReadsCoveringAtPreviousKnot) {
  const auto mod = curve_of({0.8, 0.3}, {1.0, 0.2});
  const auto cov = covering_of({1.0, 0.5, 0.25}, {1, 4, 16});
  // 0.8 reads N(0.5)=4 and 0.3 reads N(0.25)=16.
  const auto b = theorem1_bound(mod, cov, 0.1);
  EXPECT_NEAR(b.value, std::min(2.0 + 0.2, 0.4 + 0.4), 1e-14);
}

TEST(Dudley, ExactStepIntegral) {
  const auto cov = covering_of({1.0, 0.5, 0.25}, {1, 2, 4});
  EXPECT_NEAR(step_entropy(cov, 0.7), std::log(2.0), 1e-15);
  EXPECT_NEAR(step_entropy(cov, 0.1), std::log(4.0), 1e-15);
  EXPECT_EQ(step_entropy(cov, 2.0), 0.0);
  const double expected = 0.5 * std::sqrt(std::log(2.0)) + 0.5 * std::sqrt(std::log(4.0));
  EXPECT_NEAR(dudley_integral(cov, 0.0, 1.0), expected, 1e-14);
  EXPECT_NEAR(dudley_integral(cov, 0.0, 0.25), 0.25 * std::sqrt(std::log(4.0)), 1e-14);
  const auto open_top = covering_of({1.0, 0.5}, {2, 3});
  EXPECT_THROW(dudley_integral(open_top, 0.0, 2.0), std::domain_error);
}

TEST(Sudakov, RatioOfBestScale) {
  const auto cov = covering_of({1.0, 0.5, 0.25}, {1, 2, 4});
  EXPECT_NEAR(sudakov_ratio(cov, 2.0), 0.5 * std::sqrt(std::log(2.0)) / 2.0, 1e-15);
}

TEST(Chaining, LinearModulusSumsToLevelCount) {
  std::vector<double> knots, est;
  for (int i = 0; i <= 5; ++i) {
    knots.push_back(std::ldexp(1.0, 1 - i));
    est.push_back(knots.back() / 2.0);
  }
  const auto mod = curve_of(knots, est);
  EXPECT_NEAR(entropy_from_modulus(mod, 5), 6.0, 1e-14);
  const auto terms = chaining_terms(mod, 5);
  for (double t : terms) EXPECT_NEAR(t, 1.0, 1e-15);
  EXPECT_THROW(chaining_terms(curve_of({2.0, 0.5}, {1.0, 0.25}), 2), std::out_of_range);
}

TEST(Chaining, SeparatedLevelsUseShiftedKnots) {
  std::vector<ModulusCurve> levels;
  for (int i = 0; i <= 3; ++i) levels.push_back(curve_of({std::ldexp(1.0, 2 - i)}, {std::ldexp(1.0, -i)}));
  EXPECT_NEAR(entropy_from_separated_moduli(levels, 3), 4.0, 1e-14);
}

TEST(Rescale, UnitDiameter) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  Eigen::MatrixXd v(6, 4);
  for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = u(rng);
  const auto scaled = rescaled_to_unit_diameter(SampledClass(v, "x"));
  EXPECT_NEAR(EmpiricalGeometry(scaled).diameter(), 1.0, 1e-12);
}

TEST(ReferenceModulus, ExtendsUpToOneAndClamps) {
  RateCurve c{RateKind::ex1_poly_covering, 2.0, 1.0};
  const std::vector<double> knots{2.0, 1.0, 0.5, 0.1};
  const auto mod = reference_modulus(c, knots);
  EXPECT_EQ(mod.estimates[0], 0.0);
  EXPECT_EQ(mod.estimates[1], 0.0);
  EXPECT_NEAR(mod.estimates[2], std::sqrt(0.5 * std::log(2.0)), 1e-15);
  EXPECT_NEAR(mod.estimates[3], rate_reference(c, 0.1), 1e-15);
}

TEST(SeparatedLevels, OneCurvePerLevel) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd v(20, 5);
  for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = u(rng);
  const auto cls = rescaled_to_unit_diameter(SampledClass(v, "x"));
  const auto levels = separated_level_moduli(cls, 3, 100, 1);
  ASSERT_EQ(levels.size(), 4u);
  for (int i = 0; i <= 3; ++i) EXPECT_NEAR(levels[static_cast<std::size_t>(i)].deltas.front(), std::ldexp(1.0, 2 - i), 1e-15);
}

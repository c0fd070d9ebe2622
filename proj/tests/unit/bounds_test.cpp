#include "hullmod/bounds.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <numbers>
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

PsiFunction linear_psi(double c, std::size_t n = 100) {
  return PsiFunction(PsiMethod::direct_mc, n, [c](double x) { return c * x; }, {0.0, 0.5, 1.0, 2.0});
}

}  // namespace

TEST(LOfDelta, KnownValues) {
  EXPECT_NEAR(l_of_delta(1.0), 1.190848, 1e-6);
  EXPECT_NEAR(l_of_delta(0.5), 2.577142, 1e-6);
  EXPECT_THROW(l_of_delta(0.0), std::domain_error);
  EXPECT_THROW(l_of_delta(1.5), std::domain_error);
}

TEST(PsiFunction, ValidationCatchesBadShapes) {
  EXPECT_NO_THROW(linear_psi(0.3).validate());
  const auto convex = PsiFunction::from_table(PsiMethod::direct_mc, 10, {0.0, 0.5, 1.0}, {0.0, 0.1, 1.0});
  EXPECT_THROW(convex.validate(), std::invalid_argument);
  const auto shifted = PsiFunction::from_table(PsiMethod::direct_mc, 10, {0.0, 1.0}, {0.1, 0.2});
  EXPECT_THROW(shifted.validate(), std::invalid_argument);
}

TEST(PsiFunction, TableInterpolatesAndHoldsBeyondLastKnot) {
  const auto psi = PsiFunction::from_table(PsiMethod::direct_mc, 10, {0.0, 1.0, 2.0}, {0.0, 1.0, 1.5});
  EXPECT_NEAR(psi(0.5), 0.5, 1e-15);
  EXPECT_NEAR(psi(1.5), 1.25, 1e-15);
  EXPECT_EQ(psi(5.0), 1.5);
}

TEST(PsiTheorem1, HandComputed) {
  const auto mod = curve_of({1.0, 0.5, 0.25}, {2.0, 1.0, 0.5});
  const auto cov = covering_of({1.0, 0.5, 0.25}, {1, 4, 16});
  EXPECT_NEAR(psi_theorem1(mod, cov, 100, 0.1), 0.9 * std::sqrt(std::numbers::pi / 200.0), 1e-14);
  // A knot with zero modulus makes psi vanish at 0.
  const auto psi = make_psi_theorem1(curve_of({1.0, 0.5, 0.25, 0.1}, {2.0, 1.0, 0.5, 0.0}),
                                     covering_of({1.0, 0.5, 0.25, 0.1}, {1, 4, 16, 40}), 100);
  EXPECT_NO_THROW(psi.validate(1e-10));
  EXPECT_EQ(psi(0.0), 0.0);
}

TEST(PsiEntropy, HandComputed) {
  const auto cov = covering_of({1.0, 0.5, 0.25}, {1, 2, 4});
  const double expected = 4.0 * std::sqrt(3.0) / 10.0 * 0.5 * std::sqrt(std::log(4.0));
  EXPECT_NEAR(psi_entropy(cov, 100, 1.0), expected, 1e-14);
  EXPECT_NO_THROW(make_psi_entropy(cov, 100).validate(1e-10));
}

TEST(PsiDirect, ConcaveMajorant) {
  const auto psi = make_psi_direct([](double r) { return r; }, 10, {0.5, 1.0});
  EXPECT_NEAR(psi(0.5), 0.5, 1e-14);
  EXPECT_NEAR(psi(1.0), 1.0, 1e-14);
  EXPECT_NO_THROW(psi.validate());
}

TEST(FixedPoint, LargestOfSquareRoot) {
  const auto r = largest_fixed_point([](double x) { return std::sqrt(x); }, 4.0);
  EXPECT_NEAR(r.value, 1.0, 1e-7);
  EXPECT_TRUE(r.largest_verified);
  EXPECT_THROW(largest_fixed_point([](double x) { return x + 1.0; }, 1.0), std::domain_error);
}

TEST(FixedPoint, ZeroErrorLinearPsi) {
  for (double c : {0.1, 0.5, 1.0}) EXPECT_NEAR(solve_zero_error(linear_psi(c)).value, c * c, 1e-8);
}

TEST(FixedPoint, UWithConstantOracle) {
  const double delta = 0.2, t = 2.0, c = 0.01;
  const std::size_t n = 400;
  const double l = l_of_delta(delta);
  const double hand = delta + 8.0 * c + std::sqrt(2.0 * delta * (t + l) / n) + 10.0 * (t + l) / (3.0 * n);
  const auto u = solve_U(delta, t, n, [c](double) { return c; });
  EXPECT_NEAR(u.value, hand, 1e-10);
  EXPECT_FALSE(u.components.empty());
}

TEST(FixedPoint, RSolvesItsEquation) {
  const double delta = 0.01, t = 1.0;
  const std::size_t n = 2000;
  const auto r = solve_r(delta, t, n, [](double) { return 0.0; });
  const double l = l_of_delta(2.0 * r.value);
  const double rhs = delta + std::sqrt(4.0 * r.value * (t + l) / n) + 10.0 * (t + l) / (3.0 * n);
  EXPECT_NEAR(r.value, rhs, 1e-7);
  EXPECT_THROW(solve_r(0.6, t, n, [](double) { return 0.0; }), std::domain_error);
}

TEST(ConstantsProfile, JsonRoundTripAndValidation) {
  ConstantsProfile p{2.0, 3.0, 4.0, 5.0, "hand"};
  const auto back = ConstantsProfile::from_json(p.to_json());
  EXPECT_EQ(back.K_thm, 2.0);
  EXPECT_EQ(back.K_rate, 5.0);
  EXPECT_EQ(back.notes, "hand");
  ConstantsProfile bad;
  bad.K_1 = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(EntropyEquations, RZeroAndUent) {
  EXPECT_NEAR(r_zero(3.0, 100), (3.0 + std::log(std::log(100.0))) / 100.0, 1e-15);
  EXPECT_THROW(r_zero(1.0, 2), std::invalid_argument);
  // U = K (delta + c sqrt U + r0) has root sqrt U = (Kc + sqrt(K^2 c^2 + 4K(delta + r0))) / 2.
  ConstantsProfile p;
  p.K_1 = 2.0;
  const double c = 0.3, delta = 0.05, r0 = 0.01;
  const double s = (p.K_1 * c + std::sqrt(p.K_1 * p.K_1 * c * c + 4.0 * p.K_1 * (delta + r0))) / 2.0;
  EXPECT_NEAR(solve_Uent(delta, linear_psi(c), r0, p).value, s * s, 1e-7);
  const auto rent = solve_rent(delta, linear_psi(c), r0, p);
  EXPECT_GE(rent.value, delta);
}

TEST(Certificate, ScalesRateSum) {
  FixedPointResult r;
  r.value = 0.004;
  ConstantsProfile p;
  p.K_thm = 0.5;
  const auto cert = certificate("cls", 3.0, 100, r, p, 9);
  EXPECT_NEAR(cert.r0, r_zero(3.0, 100), 1e-15);
  EXPECT_NEAR(cert.bound, 0.5 * (0.004 + cert.r0), 1e-15);
  const auto j = nlohmann::json::parse(cert.to_json());
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 9u);
  const auto per = certificate_for_function("cls", 3.0, 100, 0.1, r, p);
  EXPECT_NEAR(per.bound, 0.5 * (0.1 + 0.004 + per.r0), 1e-15);
}

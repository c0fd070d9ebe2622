#include "hullmod/classdata.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace hullmod;

namespace {

Eigen::MatrixXd random_values(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd v(m, n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = u(rng);
  return v;
}

}  // namespace

TEST(SampledClass, RejectsBadInput) {
  EXPECT_THROW(SampledClass(Eigen::MatrixXd(0, 3), "empty"), std::invalid_argument);
  Eigen::MatrixXd v = Eigen::MatrixXd::Constant(2, 2, 0.5);
  v(1, 1) = std::nan("");
  EXPECT_THROW(SampledClass(v, "nan"), std::invalid_argument);
  v(1, 1) = 1.5;
  EXPECT_NO_THROW(SampledClass(v, "free"));
  EXPECT_THROW(SampledClass(v, "ranged", true), std::invalid_argument);
}

TEST(ConvexCombination, WeightsMustFormSimplexPoint) {
  EXPECT_THROW(ConvexCombination({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(ConvexCombination({1.5, -0.5}), std::invalid_argument);
  const auto u = ConvexCombination::uniform(4);
  for (double w : u.weights()) EXPECT_DOUBLE_EQ(w, 0.25);
  const auto e = ConvexCombination::vertex(3, 1);
  EXPECT_EQ(e.weights()[1], 1.0);
}

TEST(EmpiricalGeometry, MatchesDirectDistances) {
  const SampledClass cls(random_values(7, 11, 1), "r");
  const EmpiricalGeometry g(cls);
  double diam = 0.0;
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) {
      const Eigen::VectorXd d = cls.values().row(i) - cls.values().row(j);
      const double direct = d.norm() / std::sqrt(11.0);
      EXPECT_NEAR(g.distance(i, j), direct, 1e-12);
      diam = std::max(diam, direct);
    }
  EXPECT_NEAR(g.diameter(), diam, 1e-12);
  EXPECT_NEAR(g.norm(2), cls.values().row(2).norm() / std::sqrt(11.0), 1e-12);
}

TEST(EmpiricalGeometry, DuplicateRowsHaveZeroDistance) {
  Eigen::MatrixXd v = random_values(3, 5, 2);
  v.row(2) = v.row(0);
  const EmpiricalGeometry g(SampledClass(v, "dup"));
  EXPECT_EQ(g.distance(0, 2), 0.0);
  EXPECT_GT(g.min_positive_distance(), 0.0);
}

TEST(RowCoordinates, ReproducesDistancesInBothRegimes) {
  for (auto [m, n] : {std::pair{6, 20}, std::pair{30, 8}}) {
    const SampledClass cls(random_values(m, n, 3), "r");
    const EmpiricalGeometry g(cls);
    const RowCoordinates c(cls);
    EXPECT_LE(c.rank(), static_cast<std::size_t>(std::min(m, n)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) EXPECT_NEAR(c.distance(i, j), g.distance(i, j), 1e-9);
  }
}

TEST(Combination, EvaluatesWeightedRows) {
  const SampledClass cls(random_values(3, 4, 4), "r");
  const ConvexCombination w({0.2, 0.3, 0.5});
  const Eigen::VectorXd expected = 0.2 * cls.values().row(0) + 0.3 * cls.values().row(1) + 0.5 * cls.values().row(2);
  EXPECT_LT((evaluate_combination(cls, w) - expected).norm(), 1e-14);
  const std::vector<double> x{3.0, 4.0};
  EXPECT_NEAR(empirical_norm(x), std::sqrt(12.5), 1e-14);
}

TEST(Csv, RoundTrips) {
  const SampledClass cls(random_values(4, 6, 5), "r", true);
  std::stringstream buffer;
  write_class_csv(buffer, cls);
  const auto back = load_class_csv(buffer, "back", true);
  EXPECT_EQ(back.num_functions(), 4u);
  EXPECT_EQ(back.sample_size(), 6u);
  EXPECT_EQ((back.values() - cls.values()).cwiseAbs().maxCoeff(), 0.0);
  std::stringstream vec("0.5,0.25,1\n");
  EXPECT_EQ(load_vector_csv(vec), (std::vector<double>{0.5, 0.25, 1.0}));
}

TEST(Csv, RejectsRaggedRows) {
  std::stringstream ragged("1,2,3\n4,5\n");
  EXPECT_THROW(load_class_csv(ragged, "x", false), std::exception);
}

#include "hullmod/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace hullmod;

TEST(FitPowerLaw, RecoversExactExponent) {
  std::vector<double> x, y;
  for (int i = 1; i <= 10; ++i) {
    x.push_back(i);
    y.push_back(3.0 * std::pow(i, -0.75));
  }
  const auto fit = fit_power_law(x, y);
  EXPECT_NEAR(fit.exponent, -0.75, 1e-12);
  EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-12);
  EXPECT_EQ(fit.points, 6u);
  EXPECT_NEAR(fit.x_min, 3.0, 1e-12);
  EXPECT_THROW(fit_power_law(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST(ConfigHash, StableHex) {
  EXPECT_EQ(config_hash("").size(), 16u);
  EXPECT_EQ(config_hash(""), "cbf29ce484222325");
  EXPECT_NE(config_hash("a"), config_hash("b"));
}

TEST(AutoEpsGrid, SpansDiameterToHalfMinDistance) {
  Eigen::MatrixXd v(3, 1);
  v << 0.0, 0.1, 1.0;
  const EmpiricalGeometry g(SampledClass(v, "x"));
  const auto grid = auto_eps_grid(g, 8);
  EXPECT_GE(grid.front(), 1.0);
  EXPECT_NEAR(grid.back(), 0.05, 1e-12);
}

TEST(Theorem1, HoldsOnSmallSegment) {
  GeneratorSpec s;
  s.kind = GeneratorKind::segment;
  s.m = 6;
  s.n = 8;
  const auto cls = generate(s);
  Theorem1Config c;
  c.deltas = geometric_grid(1.0, 0.05, 5);
  c.draws = 3000;
  const auto report = run_theorem1_verification(cls, c);
  EXPECT_EQ(report.violations, 0u);
  EXPECT_EQ(theorem1_table(report, c).rows().size(), 5u);
  for (const auto& row : report.rows) EXPECT_GE(row.bound, 0.0);
}

TEST(ErmTrials, ZeroTrainingErrorAndCalibration) {
  ErmTrialConfig c;
  c.m = 30;
  c.n = 20;
  c.trials = 6;
  c.draws = 50;
  auto report = run_erm_trials(c);
  EXPECT_LE(report.max_train_objective, 1e-8);
  const double K = calibrate_constant(report);
  apply_constant(report, K);
  EXPECT_EQ(report.coverage, 1.0);
  apply_constant(report, 0.5 * K);
  EXPECT_LT(report.coverage, 1.0);
}

TEST(Chaining, ReferenceDominanceAndFit) {
  const auto check = run_chaining_check(2.0, 16);
  EXPECT_EQ(check.terms.size(), 17u);
  EXPECT_NEAR(check.target_exponent, 1.0, 1e-15);
  EXPECT_GT(check.fit.exponent, 0.5);
}

TEST(Report, CsvAndNumbers) {
  EXPECT_EQ(format_number(0.1), "0.1");
  CsvTable t({"a", "b"});
  t.add_row({"1", "2"});
  EXPECT_THROW(t.add_row({"1"}), std::invalid_argument);
  std::ostringstream out;
  t.write(out);
  EXPECT_EQ(out.str(), "a,b\n1,2\n");
}

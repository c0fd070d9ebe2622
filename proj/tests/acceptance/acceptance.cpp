// Acceptance checks. Each criterion prints exactly one PASS/FAIL line.

#include "hullmod/bounds.hpp"
#include "hullmod/classdata.hpp"
#include "hullmod/complexity.hpp"
#include "hullmod/experiments.hpp"
#include "hullmod/generators.hpp"
#include "hullmod/hullopt.hpp"
#include "hullmod/nets.hpp"
#include "hullmod/parallel.hpp"
#include "hullmod/process.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hullmod;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Fixture {
  std::string name;
  GeneratorSpec spec;
  std::size_t draws;
};

GeneratorSpec make_spec(GeneratorKind kind, std::size_t n, std::size_t m, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = kind;
  s.n = n;
  s.m = m;
  s.seed = seed;
  return s;
}

std::vector<Fixture> theorem1_fixtures() {
  auto ball2 = make_spec(GeneratorKind::ball, 64, 60, 5);
  ball2.dimension = 2;
  auto ball3 = make_spec(GeneratorKind::ball, 128, 60, 5);
  ball3.dimension = 3;
  return {
      {"two_point", make_spec(GeneratorKind::two_point, 16, 2, 5), 100000},
      {"segment", make_spec(GeneratorKind::segment, 16, 11, 5), 100000},
      {"ball(2)", ball2, 10000},
      {"ball(3)", ball3, 10000},
      {"interval_indicators", make_spec(GeneratorKind::interval_indicators, 120, 60, 5), 10000},
  };
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Outcome criterion1() {
  std::ostringstream detail;
  bool pass = true;
  for (const auto& f : theorem1_fixtures()) {
    const auto cls = generate(f.spec);
    const EmpiricalGeometry geometry(cls);
    Theorem1Config config;
    config.deltas = geometric_grid(geometry.diameter(), geometry.diameter() / 50.0, 10);
    config.draws = f.draws;
    config.seed = 77;
    const auto report = run_theorem1_verification(cls, config);
    double worst = 1e300;
    for (const auto& row : report.rows)
      if (row.combined_se > 0) worst = std::min(worst, (row.bound - row.hull) / row.combined_se);
    detail << f.name << " " << report.violations << "/" << report.rows.size() << " (min z " << fmt(worst) << ") ";
    pass = pass && report.violations == 0;
  }
  return {pass, detail.str()};
}

Outcome criterion2() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  constexpr double step = 0.005;
  double worst_excess = -1e300;
  int failures = 0;
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t m = 2 + instance % 2;
    const std::size_t n = 3 + instance % 4;
    Eigen::MatrixXd values(m, n);
    for (Eigen::Index i = 0; i < values.size(); ++i) values.data()[i] = unit(rng);
    const SampledClass cls(values, "random");
    std::vector<double> z(n);
    for (auto& v : z) v = normal(rng);
    const EmpiricalGeometry geometry(cls);
    const double delta = geometry.diameter() * (0.05 + 0.9 * unit(rng));
    const auto hull = hull_pair_sup(cls, z, delta);
    const double brute = simplex_bruteforce_sup(cls, z, delta, step);
    const auto c = process_values(cls, ProcessKind::gaussian, z);
    const double lip = 2.0 * c.cwiseAbs().maxCoeff();
    const double tol = 1e-3 + 2.0 * lip * step;
    const double gap = std::abs(hull.value - brute);
    worst_excess = std::max(worst_excess, gap - tol);
    if (gap > tol) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " of 50 outside tolerance, worst gap - tol " + fmt(worst_excess)};
}

Outcome criterion3() {
  constexpr std::size_t m = 5, n = 12, draws = 100000;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd values(m, n);
  for (Eigen::Index i = 0; i < values.size(); ++i) values.data()[i] = normal(rng);
  for (std::size_t i = 0; i < m; ++i) {
    const double norm = values.row(i).norm() / std::sqrt(static_cast<double>(n));
    values.row(i) /= norm;
  }
  const SampledClass cls(values, "unit_rows");
  const Eigen::MatrixXd gram = empirical_gram(cls);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
  for (std::size_t k = 0; k < draws; ++k) {
    const auto draw = draw_process(cls, ProcessKind::gaussian, draw_seed(33, k));
    const Eigen::Map<const Eigen::VectorXd> w(draw.values.data(), static_cast<Eigen::Index>(m));
    mean += w;
    second += w * w.transpose();
  }
  mean /= static_cast<double>(draws);
  const Eigen::MatrixXd cov = second / static_cast<double>(draws) - mean * mean.transpose();
  const double err = (cov - gram).cwiseAbs().maxCoeff();
  return {err <= 0.02, "max |cov - Gram| = " + fmt(err)};
}

Outcome criterion4() {
  auto fixtures = theorem1_fixtures();
  auto lattice = make_spec(GeneratorKind::lattice_holder, 64, 80, 5);
  lattice.V = 1.0;
  fixtures.push_back({"lattice_holder", lattice, 0});
  std::size_t nets = 0;
  std::string failure;
  auto guarded = [&](const std::string& where, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      if (failure.empty()) failure = where + ": " + e.what();
    }
  };
  for (const auto& f : fixtures) {
    const auto cls = generate(f.spec);
    const EmpiricalGeometry geometry(cls);
    for (const auto& grid : {auto_eps_grid(geometry, 24), geometric_grid(2.0, 1e-3, 16)}) {
      for (double eps : grid) {
        guarded(f.name, [&] { check_net_invariants(greedy_net(cls, geometry, eps), geometry); });
        ++nets;
      }
      const auto curve = covering_curve(cls, geometry, grid);
      if (!std::is_sorted(curve.sizes.begin(), curve.sizes.end()) && failure.empty())
        failure = f.name + ": covering curve not monotone";
    }
  }
  auto big = make_spec(GeneratorKind::ball, 64, 5000, 3);
  big.dimension = 2;
  const auto cls = generate(big);
  const RowCoordinates coords(cls);
  const auto grid = geometric_grid(0.1, 0.005, 8);
  for (double eps : grid) {
    guarded("ball(2) m=5000 coordinates", [&] { check_net_invariants(greedy_net(cls, coords, eps), coords); });
    ++nets;
  }
  const auto curve = covering_curve(cls, coords, grid);
  if (!std::is_sorted(curve.sizes.begin(), curve.sizes.end()) && failure.empty())
    failure = "coordinate covering curve not monotone";
  return {failure.empty(), failure.empty() ? std::to_string(nets) + " nets checked" : failure};
}

Outcome criterion5() {
  std::ostringstream detail;
  bool pass = true;
  for (double c : {0.1, 0.5, 1.0}) {
    const PsiFunction psi(PsiMethod::direct_mc, 100, [c](double x) { return c * x; }, geometric_grid(2.0, 1e-6, 32));
    const auto r = solve_zero_error(psi);
    const double err = std::abs(r.value - c * c);
    detail << "c=" << c << " err " << fmt(err) << "; ";
    pass = pass && err <= 1e-8;
  }
  const double delta = 0.1, t = 1.0;
  const std::size_t n = 100;
  const double l = 2.0 * std::log(std::numbers::pi / std::sqrt(3.0) * std::log2(2.0 / delta));
  const double hand = delta + std::sqrt(2.0 * delta * (t + l) / n) + 10.0 * (t + l) / (3.0 * n);
  const auto u = solve_U(delta, t, n, [](double) { return 0.0; });
  const double err = std::abs(u.value - hand);
  detail << "U err " << fmt(err);
  pass = pass && err <= 1e-10;
  return {pass, detail.str()};
}

Outcome criterion6() {
  auto spec = make_spec(GeneratorKind::two_point, 16, 2, 6);
  spec.distance = 1.0;
  const auto cls = generate(spec);
  const std::vector<double> deltas{2.0, 1.0, 0.5, 0.25};
  const auto curve = modulus_convex_hull(cls, deltas, 100000, 66);
  std::ostringstream detail;
  bool pass = true;
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    const double expected = std::min(deltas[j], 1.0) * std::sqrt(2.0 / std::numbers::pi);
    const double z = (curve.estimates[j] - expected) / curve.std_errors[j];
    detail << "delta " << deltas[j] << " z " << fmt(z) << "; ";
    pass = pass && std::abs(z) <= 3.0;
  }
  return {pass, detail.str()};
}

Outcome criterion7() {
  std::ostringstream detail;
  bool pass = true;
  for (std::size_t d : {1u, 2u, 3u}) {
    auto spec = make_spec(GeneratorKind::ball, 64, d == 1 ? 5000 : d == 2 ? 50000 : 100000, 3);
    spec.dimension = d;
    const auto cls = generate(spec);
    const RowCoordinates coords(cls);
    const double radius = 1.0 / (2.0 * std::sqrt(static_cast<double>(d)));
    const double top = d == 1 ? 0.5 : d == 2 ? 0.2 : 0.3;
    const double bottom = d == 1 ? 0.05 : d == 2 ? 0.01 : 0.04;
    const auto grid = geometric_grid(top * radius, bottom * radius, 12);
    const double slope = covering_slope(covering_curve(cls, coords, grid)).exponent;
    const bool ok = std::abs(slope - static_cast<double>(d)) <= 0.2 * static_cast<double>(d);
    detail << "ball(" << d << ") slope " << fmt(slope) << "; ";
    pass = pass && ok;
  }
  {
    const auto cls = generate(make_spec(GeneratorKind::interval_indicators, 200, 100, 3));
    const auto deltas = geometric_grid(0.6, 0.03, 10);
    const auto curve = modulus_convex_hull(cls, deltas, 500, 3);
    const double exponent = fit_power_law(deltas, curve.estimates).exponent;
    detail << "interval hull exponent " << fmt(exponent) << "; ";
    pass = pass && std::abs(exponent - 0.5) <= 0.15;
  }
  for (std::size_t V : {2u, 3u}) {
    RhatSweepConfig config;
    config.dimension = V;
    config.m = 600;
    config.draws = 200;
    config.seed = 11;
    config.n_values = {128, 256, 512, 1024, 2048, 4096, 8192};
    const auto sweep = run_rhat_sweep(config);
    detail << "r_hat V=" << V << " exponent " << fmt(sweep.fit.exponent) << " (target " << fmt(sweep.target) << "); ";
    pass = pass && std::abs(sweep.fit.exponent - sweep.target) <= 0.15;
  }
  return {pass, detail.str()};
}

Outcome criterion8() {
  ErmTrialConfig config;
  config.m = 200;
  config.n = 100;
  config.trials = 200;
  config.t = 3.0;
  config.draws = 400;
  config.seed = 101;
  const auto calibration = run_erm_trials(config);
  const double K = calibrate_constant(calibration);
  config.seed = 202;
  auto holdout = run_erm_trials(config);
  apply_constant(holdout, K);
  const double train = std::max(calibration.max_train_objective, holdout.max_train_objective);
  const bool pass = train <= 1e-8 && holdout.coverage >= 0.95;
  return {pass, "K = " + fmt(K) + " (seed 101), holdout coverage " + fmt(holdout.coverage) +
                    " (seed 202), max training objective " + fmt(train)};
}

Outcome criterion9() {
  const auto check = run_chaining_check(2.0, 24);
  const bool fit_ok = std::abs(check.fit.exponent - check.target_exponent) <= 0.2;
  std::string detail = "fitted exponent " + fmt(check.fit.exponent) + " (target " + fmt(check.target_exponent) +
                       ", raw fit with log factor " + fmt(check.raw_fit.exponent) + "), dominance " +
                       (check.dominance ? "holds" : "fails");
  if (!check.dominance)
    detail += " at level " + std::to_string(check.first_failure) + " with ratio " +
              fmt(check.ratios[static_cast<std::size_t>(check.first_failure - 1)]);
  return {fit_ok && check.dominance, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hullmod acceptance criteria"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "criterion number 1-9 (0 runs all)")->check(CLI::Range(0, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> checks{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9};
  bool all = true;
  for (int c = 1; c <= 9; ++c) {
    if (criterion != 0 && c != criterion) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = checks[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << c << ": " << (outcome.pass ? "PASS" : "FAIL") << " [" << fmt(seconds) << " s] "
              << outcome.detail << std::endl;
    all = all && outcome.pass;
  }
  return all ? 0 : 1;
}

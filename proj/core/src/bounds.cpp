#include "hullmod/bounds.hpp"

#include "hullmod/complexity.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hullmod {

namespace {

std::vector<double> default_psi_grid() {
  auto grid = geometric_grid(2.0, 2e-6, 64);
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  return grid;
}

// (omega_j, sqrt N_j) for every usable candidate eps.
std::vector<std::pair<double, double>> theorem1_candidates(const ModulusCurve& modulus,
                                                           const CoveringCurve& covering) {
  if (covering.epsilons.empty() || covering.sizes.size() != covering.epsilons.size())
    throw std::invalid_argument("covering curve is empty or inconsistent");
  std::vector<std::pair<double, double>> out;
  for (std::size_t j = 0; j < modulus.deltas.size(); ++j) {
    for (std::size_t i = 0; i < covering.epsilons.size(); ++i) {
      if (covering.epsilons[i] <= modulus.deltas[j]) {
        out.emplace_back(modulus.estimates[j], std::sqrt(static_cast<double>(covering.sizes[i])));
        break;
      }
    }
  }
  if (out.empty()) throw std::invalid_argument("no modulus knot lies on or above the covering grid");
  return out;
}

double min_affine(const std::vector<std::pair<double, double>>& lines, double delta) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [omega, root_n] : lines) best = std::min(best, omega + delta * root_n);
  return best;
}

void require_sample_size(std::size_t n) {
  if (n < 1) throw std::invalid_argument("sample size must be positive");
}

// Smallest R >= start with rhs(R) <= R, by geometric growth.
double upper_start(const std::function<double(double)>& rhs, double start) {
  double r = start;
  for (int i = 0; i < 200; ++i) {
    const double v = rhs(r);
    if (v <= r) return r;
    r = std::max(2.0 * r, v);
  }
  throw std::runtime_error("could not bracket the fixed point from above");
}

}  // namespace

double l_of_delta(double delta) {
  if (!(delta > 0.0) || !(delta <= 1.0)) throw std::domain_error("l(delta) needs 0 < delta <= 1");
  return 2.0 * std::log(std::numbers::pi / std::sqrt(3.0) * std::log2(2.0 / delta));
}

std::string to_string(PsiMethod method) {
  switch (method) {
    case PsiMethod::theorem1: return "theorem1";
    case PsiMethod::entropy_integral: return "entropy_integral";
    case PsiMethod::direct_mc: return "direct_mc";
  }
  return "unknown";
}

PsiFunction::PsiFunction(PsiMethod method, std::size_t n, std::function<double(double)> evaluator,
                         std::vector<double> grid)
    : method_(method), n_(n), evaluator_(std::move(evaluator)), grid_(std::move(grid)) {
  if (!evaluator_) throw std::invalid_argument("psi evaluator is empty");
  std::sort(grid_.begin(), grid_.end());
  values_.reserve(grid_.size());
  for (double x : grid_) values_.push_back(evaluator_(x));
}

void PsiFunction::validate(double tol) const {
  if (std::abs(evaluator_(0.0)) > tol) throw std::invalid_argument("psi(0) must be 0");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (values_[i] < -tol) throw std::invalid_argument("psi must be nonnegative");
    if (i > 0 && values_[i] < values_[i - 1] - tol) throw std::invalid_argument("psi must be nondecreasing");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    for (std::size_t j = i + 1; j < grid_.size(); ++j) {
      const double mid = evaluator_(0.5 * (grid_[i] + grid_[j]));
      if (mid < 0.5 * (values_[i] + values_[j]) - tol) throw std::invalid_argument("psi fails midpoint concavity");
    }
  }
}

PsiFunction PsiFunction::from_table(PsiMethod method, std::size_t n, std::vector<double> grid,
                                    std::vector<double> values) {
  if (grid.size() != values.size() || grid.empty()) throw std::invalid_argument("psi table is empty or ragged");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("psi grid must be strictly increasing");
  auto eval = [grid, values](double x) {
    if (x <= grid.front()) return values.front();
    if (x >= grid.back()) return values.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const auto hi = static_cast<std::size_t>(it - grid.begin());
    const double w = (x - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
    return values[hi - 1] + w * (values[hi] - values[hi - 1]);
  };
  return PsiFunction(method, n, eval, grid);
}

double psi_theorem1(const ModulusCurve& modulus, const CoveringCurve& covering, std::size_t n, double delta) {
  require_sample_size(n);
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  return std::sqrt(std::numbers::pi / (2.0 * static_cast<double>(n))) *
         min_affine(theorem1_candidates(modulus, covering), delta);
}

PsiFunction make_psi_theorem1(ModulusCurve modulus, CoveringCurve covering, std::size_t n) {
  require_sample_size(n);
  const double scale = std::sqrt(std::numbers::pi / (2.0 * static_cast<double>(n)));
  auto lines = theorem1_candidates(modulus, covering);
  return PsiFunction(
      PsiMethod::theorem1, n, [lines = std::move(lines), scale](double x) { return scale * min_affine(lines, x); },
      default_psi_grid());
}

double psi_entropy(const CoveringCurve& covering, std::size_t n, double delta) {
  require_sample_size(n);
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  return 4.0 * std::sqrt(3.0) / std::sqrt(static_cast<double>(n)) *
         dudley_integral(covering, 0.0, 0.5 * std::sqrt(delta));
}

PsiFunction make_psi_entropy(CoveringCurve covering, std::size_t n) {
  require_sample_size(n);
  double top = 2.0;
  if (covering.sizes.front() != 1) {
    const double e0 = covering.epsilons.front();
    top = std::min(top, 4.0 * e0 * e0);
  }
  auto grid = geometric_grid(top, top * 1e-6, 48);
  grid.push_back(0.0);
  return PsiFunction(
      PsiMethod::entropy_integral, n, [covering = std::move(covering), n](double x) { return psi_entropy(covering, n, x); },
      grid);
}

PsiFunction make_psi_direct(const std::function<double(double)>& localized, std::size_t n, std::vector<double> grid) {
  require_sample_size(n);
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() < 0.0) throw std::invalid_argument("psi grid must be nonnegative");
  std::vector<double> raw;
  for (double x : grid) raw.push_back(x == 0.0 ? 0.0 : localized(x * x));
  // Upper concave hull through (0, 0).
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    while (hull.size() >= 2) {
      const auto a = hull[hull.size() - 2];
      const auto b = hull.back();
      const double cross = (grid[b] - grid[a]) * (raw[i] - raw[a]) - (raw[b] - raw[a]) * (grid[i] - grid[a]);
      if (cross >= 0.0) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  std::vector<double> values(grid.size());
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const auto a = hull[h];
    const auto b = hull[h + 1];
    for (std::size_t i = a; i <= b; ++i)
      values[i] = raw[a] + (raw[b] - raw[a]) * (grid[i] - grid[a]) / (grid[b] - grid[a]);
  }
  if (hull.size() == 1) values[0] = raw[0];
  // Past the peak the hull may descend; hold it flat to stay nondecreasing.
  for (std::size_t i = 1; i < values.size(); ++i) values[i] = std::max(values[i], values[i - 1]);
  return PsiFunction::from_table(PsiMethod::direct_mc, n, grid, values);
}

std::string to_string(FixedPointEquation equation) {
  switch (equation) {
    case FixedPointEquation::generic: return "generic";
    case FixedPointEquation::Uo: return "Uo";
    case FixedPointEquation::U: return "U";
    case FixedPointEquation::r: return "r";
    case FixedPointEquation::Uent: return "Uent";
    case FixedPointEquation::rent: return "rent";
  }
  return "unknown";
}

FixedPointResult largest_fixed_point(const std::function<double(double)>& rhs, double r_max,
                                     FixedPointOptions options) {
  if (!(r_max >= 0.0) || !std::isfinite(r_max)) throw std::invalid_argument("r_max must be finite and nonnegative");
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("fixed-point tolerance must be positive");
  const double top = rhs(r_max);
  if (top > r_max) throw std::domain_error("rhs(r_max) exceeds r_max");

  FixedPointResult result;
  result.trace.push_back(r_max);
  double r = r_max;
  double next = top;
  for (;;) {
    result.trace.push_back(next);
    ++result.iterations;
    if (std::abs(next - r) <= options.tolerance) break;
    if (result.iterations >= options.max_iterations)
      throw std::runtime_error("fixed-point iteration hit its iteration limit");
    r = next;
    next = rhs(r);
  }
  result.value = next;
  result.residual = std::abs(next - rhs(next));
  const double probe = std::max(next * (1.0 + options.probe_margin), 10.0 * options.tolerance);
  result.largest_verified = rhs(probe) < probe;
  return result;
}

FixedPointResult solve_zero_error(const PsiFunction& psi, FixedPointOptions options) {
  const double at_one = psi(1.0);
  const double r_max = std::max(1.0, at_one * at_one + 1.0);
  auto result = largest_fixed_point([&psi](double r) { return psi(std::sqrt(r)); }, r_max, options);
  result.equation = FixedPointEquation::Uo;
  result.components = {{"psi(sqrt r)", psi(std::sqrt(result.value))}};
  return result;
}

namespace {

struct UTerms {
  double delta;
  double complexity;
  double deviation;
  double remainder;
  double total() const { return delta + complexity + deviation + remainder; }
};

UTerms u_terms(double delta, double t, std::size_t n, const LocalizedOracle& oracle, double u) {
  const double l = l_of_delta(delta);
  const double nn = static_cast<double>(n);
  return {delta, 8.0 * oracle(u), std::sqrt(2.0 * delta * (t + l) / nn), 10.0 * (t + l) / (3.0 * nn)};
}

void require_u_inputs(double delta, double t, std::size_t n) {
  if (!(delta > 0.0) || !(delta <= 1.0)) throw std::domain_error("delta must lie in (0, 1]");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  require_sample_size(n);
}

}  // namespace

FixedPointResult solve_U(double delta, double t, std::size_t n, const LocalizedOracle& oracle,
                         FixedPointOptions options) {
  require_u_inputs(delta, t, n);
  auto rhs = [&](double u) { return u_terms(delta, t, n, oracle, u).total(); };
  auto result = largest_fixed_point(rhs, upper_start(rhs, 1.0), options);
  result.equation = FixedPointEquation::U;
  const auto terms = u_terms(delta, t, n, oracle, result.value);
  result.components = {{"delta", terms.delta},
                       {"8*rademacher", terms.complexity},
                       {"sqrt(2 delta (t+l)/n)", terms.deviation},
                       {"10(t+l)/(3n)", terms.remainder}};
  return result;
}

FixedPointResult solve_r(double delta, double t, std::size_t n, const LocalizedOracle& oracle,
                         FixedPointOptions options) {
  require_u_inputs(delta, t, n);
  std::map<double, double> u_cache;
  auto u_of = [&](double radius) {
    auto it = u_cache.find(radius);
    if (it != u_cache.end()) return it->second;
    const double u = solve_U(radius, t, n, oracle, options).value;
    u_cache.emplace(radius, u);
    return u;
  };
  const double nn = static_cast<double>(n);
  auto terms = [&](double r) {
    const double l = l_of_delta(2.0 * r);
    return std::array<double, 4>{delta, 8.0 * oracle(u_of(2.0 * r)), std::sqrt(4.0 * r * (t + l) / nn),
                                 10.0 * (t + l) / (3.0 * nn)};
  };
  auto rhs = [&](double r) {
    const auto v = terms(r);
    return v[0] + v[1] + v[2] + v[3];
  };
  if (rhs(0.5) > 0.5) throw std::domain_error("r(delta) exceeds 1/2, where l(2r) is undefined");
  auto result = largest_fixed_point(rhs, 0.5, options);
  result.equation = FixedPointEquation::r;
  const auto v = terms(result.value);
  result.components = {{"delta", v[0]},
                       {"8*rademacher(U(2r))", v[1]},
                       {"sqrt(4 r (t+l(2r))/n)", v[2]},
                       {"10(t+l(2r))/(3n)", v[3]},
                       {"U(2r)", u_of(2.0 * result.value)}};
  return result;
}

void ConstantsProfile::validate() const {
  for (double k : {K_thm, K_1, K_2, K_rate})
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("profile constants must be positive and finite");
}

std::string ConstantsProfile::to_json() const {
  nlohmann::json j = {{"K_thm", K_thm}, {"K_1", K_1}, {"K_2", K_2}, {"K_rate", K_rate}, {"notes", notes}};
  return j.dump(2);
}

ConstantsProfile ConstantsProfile::from_json(const std::string& text) {
  ConstantsProfile p;
  try {
    const auto j = nlohmann::json::parse(text);
    p.K_thm = j.value("K_thm", 1.0);
    p.K_1 = j.value("K_1", 1.0);
    p.K_2 = j.value("K_2", 1.0);
    p.K_rate = j.value("K_rate", 1.0);
    p.notes = j.value("notes", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad constants profile: ") + e.what());
  }
  p.validate();
  return p;
}

ConstantsProfile ConstantsProfile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

double r_zero(double t, std::size_t n) {
  if (n < 3) throw std::invalid_argument("n >= 3 is required for log log n");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  const double nn = static_cast<double>(n);
  return (t + std::log(std::log(nn))) / nn;
}

FixedPointResult solve_Uent(double delta, const PsiFunction& psi, double r0, const ConstantsProfile& profile,
                            FixedPointOptions options) {
  profile.validate();
  if (!(delta > 0.0) || !(r0 >= 0.0)) throw std::invalid_argument("need delta > 0 and r0 >= 0");
  auto rhs = [&](double u) { return profile.K_1 * (delta + psi(std::sqrt(u)) + r0); };
  auto result = largest_fixed_point(rhs, upper_start(rhs, 1.0), options);
  result.equation = FixedPointEquation::Uent;
  result.components = {{"K1*delta", profile.K_1 * delta},
                       {"K1*psi(sqrt U)", profile.K_1 * psi(std::sqrt(result.value))},
                       {"K1*r0", profile.K_1 * r0}};
  return result;
}

FixedPointResult solve_rent(double delta, const PsiFunction& psi, double r0, const ConstantsProfile& profile,
                            FixedPointOptions options) {
  profile.validate();
  if (!(delta > 0.0) || !(r0 >= 0.0)) throw std::invalid_argument("need delta > 0 and r0 >= 0");
  std::map<double, double> u_cache;
  auto u_of = [&](double radius) {
    auto it = u_cache.find(radius);
    if (it != u_cache.end()) return it->second;
    const double u = solve_Uent(radius, psi, r0, profile, options).value;
    u_cache.emplace(radius, u);
    return u;
  };
  auto rhs = [&](double r) {
    return delta + profile.K_2 * (psi(std::sqrt(u_of(2.0 * r))) + std::sqrt(r * r0) + r0);
  };
  auto result = largest_fixed_point(rhs, upper_start(rhs, 1.0), options);
  result.equation = FixedPointEquation::rent;
  const double r = result.value;
  result.components = {{"delta", delta},
                       {"K2*psi(sqrt U(2r))", profile.K_2 * psi(std::sqrt(u_of(2.0 * r)))},
                       {"K2*sqrt(r r0)", profile.K_2 * std::sqrt(r * r0)},
                       {"K2*r0", profile.K_2 * r0}};
  return result;
}

std::string Certificate::to_json() const {
  nlohmann::json j = {{"bound", bound},
                      {"components",
                       {{"r_hat", r_hat}, {"t", t}, {"n", n}, {"r0", r0}, {"K", K}, {"empirical_term", empirical_term}}},
                      {"class", class_label},
                      {"seed", seed},
                      {"profile", nlohmann::json::parse(profile.to_json())}};
  return j.dump(2);
}

Certificate certificate(const std::string& class_label, double t, std::size_t n, const FixedPointResult& r_hat,
                        const ConstantsProfile& profile, std::uint64_t seed) {
  profile.validate();
  Certificate c;
  c.r_hat = r_hat.value;
  c.t = t;
  c.n = n;
  c.r0 = r_zero(t, n);
  c.K = profile.K_thm;
  c.bound = c.K * (c.r_hat + c.r0);
  c.class_label = class_label;
  c.seed = seed;
  c.profile = profile;
  return c;
}

Certificate certificate_for_function(const std::string& class_label, double t, std::size_t n, double empirical_mean,
                                     const FixedPointResult& r_hat, const ConstantsProfile& profile,
                                     std::uint64_t seed) {
  if (!(empirical_mean >= 0.0)) throw std::invalid_argument("P_n f must be nonnegative");
  auto c = certificate(class_label, t, n, r_hat, profile, seed);
  c.empirical_term = c.K * empirical_mean;
  c.bound += c.empirical_term;
  return c;
}

}  // namespace hullmod

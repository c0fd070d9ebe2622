#include "hullmod/complexity.hpp"

#include "hullmod/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hullmod {

namespace {

void require_positive_v(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error("rate exponent V must be positive");
}

std::size_t dyadic_knot(const ModulusCurve& modulus, double target) {
  for (std::size_t j = 0; j < modulus.deltas.size(); ++j)
    if (std::abs(modulus.deltas[j] - target) <= 1e-12 * target) return j;
  throw std::out_of_range("modulus curve has no knot at dyadic scale " + std::to_string(target));
}

void require_curve(const CoveringCurve& covering) {
  if (covering.epsilons.empty() || covering.epsilons.size() != covering.entropies.size() ||
      covering.epsilons.size() != covering.sizes.size())
    throw std::invalid_argument("covering curve is empty or inconsistent");
}

}  // namespace

double rate_reference(const RateCurve& curve, double x) {
  if (!(x > 0.0) || !(x <= curve.x_max)) throw std::domain_error("rate curve evaluated outside (0, x_max]");
  const double v = curve.exponent;
  const double k = curve.constant;
  const double l = std::log(1.0 / x);
  switch (curve.kind) {
    case RateKind::ex1_poly_covering:
      require_positive_v(v);
      return k * std::pow(x, 2.0 / (2.0 + v)) * std::pow(l, v / (2.0 + v));
    case RateKind::ex2_smallV:
      require_positive_v(v);
      if (!(v < 2.0)) throw std::domain_error("ex2_smallV needs 0 < V < 2");
      return k * std::pow(l, 0.5 - 1.0 / v);
    case RateKind::ex2_Veq2:
      return k * l;
    case RateKind::ex2_bigV:
      if (!(v > 2.0) || !std::isfinite(v)) throw std::domain_error("ex2_bigV needs V > 2");
      return k * std::pow(x, 1.0 - v / 2.0);
    case RateKind::hullentropy_ex1:
      require_positive_v(v);
      return k * std::pow(x, -2.0 * v / (2.0 + v)) * std::pow(l, 2.0 * v / (2.0 + v));
    case RateKind::hullentropy_ex2:
      require_positive_v(v);
      if (v < 2.0) return k * std::pow(x, -2.0) * std::pow(l, 1.0 - v / 2.0);
      if (v == 2.0) return k * std::pow(x, -2.0) * l * l;
      return k * std::pow(x, -v);
  }
  throw std::logic_error("unknown rate kind");
}

RateKind parse_rate_kind(const std::string& name) {
  if (name == "ex1_poly_covering") return RateKind::ex1_poly_covering;
  if (name == "ex2_smallV") return RateKind::ex2_smallV;
  if (name == "ex2_Veq2") return RateKind::ex2_Veq2;
  if (name == "ex2_bigV") return RateKind::ex2_bigV;
  if (name == "hullentropy_ex1") return RateKind::hullentropy_ex1;
  if (name == "hullentropy_ex2") return RateKind::hullentropy_ex2;
  throw std::invalid_argument("unknown rate kind '" + name + "'");
}

std::string to_string(RateKind kind) {
  switch (kind) {
    case RateKind::ex1_poly_covering: return "ex1_poly_covering";
    case RateKind::ex2_smallV: return "ex2_smallV";
    case RateKind::ex2_Veq2: return "ex2_Veq2";
    case RateKind::ex2_bigV: return "ex2_bigV";
    case RateKind::hullentropy_ex1: return "hullentropy_ex1";
    case RateKind::hullentropy_ex2: return "hullentropy_ex2";
  }
  return "unknown";
}

Theorem1Bound theorem1_bound(const ModulusCurve& modulus, const CoveringCurve& covering, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  require_curve(covering);
  Theorem1Bound best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < modulus.deltas.size(); ++j) {
    const double eps = modulus.deltas[j];
    std::size_t c = covering.epsilons.size();
    for (std::size_t i = 0; i < covering.epsilons.size(); ++i) {
      if (covering.epsilons[i] <= eps) {
        c = i;
        break;
      }
    }
    if (c == covering.epsilons.size()) continue;
    const double value = 2.0 * modulus.estimates[j] + delta * std::sqrt(static_cast<double>(covering.sizes[c]));
    if (value < best.value) {
      best.value = value;
      best.argmin_eps = eps;
      best.modulus_term = modulus.estimates[j];
      best.modulus_std_error = j < modulus.std_errors.size() ? modulus.std_errors[j] : 0.0;
      best.covering_size = covering.sizes[c];
    }
  }
  if (!std::isfinite(best.value)) throw std::invalid_argument("no modulus knot lies on or above the covering grid");
  return best;
}

double step_entropy(const CoveringCurve& covering, double u) {
  require_curve(covering);
  const auto& eps = covering.epsilons;
  if (u > eps.front()) {
    if (covering.sizes.front() != 1) throw std::domain_error("entropy requested above the coarsest covering knot");
    return 0.0;
  }
  if (u == eps.front()) return covering.entropies.front();
  for (std::size_t i = 0; i + 1 < eps.size(); ++i)
    if (u >= eps[i + 1]) return covering.entropies[i + 1];
  return covering.entropies.back();
}

double dudley_integral(const CoveringCurve& covering, double lower, double upper) {
  require_curve(covering);
  if (!(lower >= 0.0) || !(upper >= lower)) throw std::invalid_argument("need 0 <= lower <= upper");
  const auto& eps = covering.epsilons;
  if (upper > eps.front() && covering.sizes.front() != 1)
    throw std::domain_error("integral extends above the coarsest covering knot");
  auto overlap = [&](double a, double b) { return std::max(0.0, std::min(b, upper) - std::max(a, lower)); };
  double total = overlap(0.0, eps.back()) * std::sqrt(covering.entropies.back());
  for (std::size_t i = 0; i + 1 < eps.size(); ++i)
    total += overlap(eps[i + 1], eps[i]) * std::sqrt(covering.entropies[i + 1]);
  return total;
}

double sudakov_ratio(const CoveringCurve& covering, double sup_estimate) {
  require_curve(covering);
  if (!(sup_estimate > 0.0)) throw std::invalid_argument("supremum estimate must be positive");
  double best = 0.0;
  for (std::size_t i = 0; i < covering.epsilons.size(); ++i)
    best = std::max(best, covering.epsilons[i] * std::sqrt(covering.entropies[i]));
  return best / sup_estimate;
}

std::vector<double> chaining_terms(const ModulusCurve& modulus, int k) {
  if (k < 0) throw std::invalid_argument("chaining depth must be nonnegative");
  std::vector<double> terms;
  for (int i = 0; i <= k; ++i) {
    const double scale = std::ldexp(1.0, 1 - i);
    terms.push_back(std::ldexp(modulus.estimates[dyadic_knot(modulus, scale)], i));
  }
  return terms;
}

double entropy_from_modulus(const ModulusCurve& modulus, int k) {
  double total = 0.0;
  for (double t : chaining_terms(modulus, k)) total += t;
  return total;
}

double entropy_from_separated_moduli(std::span<const ModulusCurve> level_moduli, int k) {
  if (k < 0 || level_moduli.size() < static_cast<std::size_t>(k) + 1)
    throw std::invalid_argument("need one separated-subset modulus per level");
  double total = 0.0;
  for (int i = 0; i <= k; ++i) {
    const auto& level = level_moduli[static_cast<std::size_t>(i)];
    total += std::ldexp(level.estimates[dyadic_knot(level, std::ldexp(1.0, 2 - i))], i);
  }
  return total;
}

std::vector<ModulusCurve> separated_level_moduli(const SampledClass& cls, int k, std::size_t n_draws,
                                                 std::uint64_t seed) {
  if (k < 0) throw std::invalid_argument("chaining depth must be nonnegative");
  const EmpiricalGeometry geometry(cls);
  std::vector<ModulusCurve> out;
  for (int i = 0; i <= k; ++i) {
    const auto net = greedy_net(cls, geometry, std::ldexp(1.0, -i - 1));
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(net.size()), cls.values().cols());
    for (std::size_t r = 0; r < net.size(); ++r)
      rows.row(static_cast<Eigen::Index>(r)) = cls.values().row(static_cast<Eigen::Index>(net.center_indices[r]));
    const SampledClass subset(std::move(rows), cls.label() + "/sep" + std::to_string(i));
    const double scale = std::ldexp(1.0, 2 - i);
    out.push_back(modulus_finite(subset, std::span<const double>(&scale, 1), n_draws,
                                 draw_seed(seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

SampledClass rescaled_to_unit_diameter(const SampledClass& cls) {
  const double diam = EmpiricalGeometry(cls).diameter();
  if (!(diam > 0.0)) throw std::invalid_argument("class has zero diameter");
  return SampledClass(cls.values() / diam, cls.label() + "/unit-diameter");
}

ModulusCurve reference_modulus(const RateCurve& curve, std::span<const double> knots) {
  RateCurve open = curve;
  open.x_max = std::nextafter(1.0, 0.0);
  ModulusCurve out;
  out.deltas.assign(knots.begin(), knots.end());
  for (double x : knots) {
    out.estimates.push_back(x >= 1.0 ? 0.0 : rate_reference(open, x));
    out.std_errors.push_back(0.0);
  }
  return out;
}

}  // namespace hullmod

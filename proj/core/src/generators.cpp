#include "hullmod/generators.hpp"

#include "hullmod/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hullmod {

namespace {

constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kLatentStream = 2;
constexpr std::uint64_t kBasisStream = 3;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t id) { return std::mt19937_64(draw_seed(seed, id)); }

Eigen::MatrixXd constant_rows(std::span<const double> levels, std::size_t n) {
  Eigen::MatrixXd values(static_cast<Eigen::Index>(levels.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < levels.size(); ++i) values.row(static_cast<Eigen::Index>(i)).setConstant(levels[i]);
  return values;
}

// n x d, columns orthonormal in L2(P_n); the bool reports a Walsh basis.
std::pair<Eigen::MatrixXd, bool> orthonormal_basis(std::size_t n, std::size_t d, std::uint64_t seed) {
  auto rng = stream(seed, kBasisStream);
  const auto nn = static_cast<Eigen::Index>(n);
  const auto dd = static_cast<Eigen::Index>(d);
  if (std::has_single_bit(n) && d < n) {
    std::vector<std::uint64_t> labels(n - 1);
    std::iota(labels.begin(), labels.end(), 1);
    std::shuffle(labels.begin(), labels.end(), rng);
    Eigen::MatrixXd basis(nn, dd);
    for (Eigen::Index j = 0; j < dd; ++j)
      for (Eigen::Index k = 0; k < nn; ++k)
        basis(k, j) = std::popcount(labels[static_cast<std::size_t>(j)] & static_cast<std::uint64_t>(k)) % 2 ? -1.0 : 1.0;
    return {basis, true};
  }
  if (d > n) throw std::invalid_argument("ball dimension exceeds the sample size");
  std::normal_distribution<double> normal;
  Eigen::MatrixXd gauss(nn, dd);
  for (Eigen::Index j = 0; j < dd; ++j)
    for (Eigen::Index k = 0; k < nn; ++k) gauss(k, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(nn, dd);
  return {q * std::sqrt(static_cast<double>(n)), false};
}

SampledClass make_ball(const GeneratorSpec& spec) {
  const std::size_t d = spec.dimension;
  if (d < 1 || spec.m < 1) throw std::invalid_argument("ball needs d >= 1 and m >= 1");
  auto rng = stream(spec.seed, kLatentStream);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd latent(static_cast<Eigen::Index>(spec.m), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < latent.rows(); ++i) {
    Eigen::VectorXd dir(static_cast<Eigen::Index>(d));
    do {
      for (auto& v : dir) v = normal(rng);
    } while (dir.norm() == 0.0);
    const double radius = std::pow(unit(rng), 1.0 / static_cast<double>(d));
    latent.row(i) = dir.transpose() * (radius / dir.norm());
  }
  const auto [basis, walsh] = orthonormal_basis(spec.n, d, spec.seed);
  Eigen::MatrixXd values = latent * basis.transpose();
  if (spec.range_01) {
    const double bound = walsh ? std::sqrt(static_cast<double>(d)) : std::max(values.cwiseAbs().maxCoeff(), 1e-300);
    values = (values.array() / (2.0 * bound) + 0.5).matrix();
  }
  return SampledClass(std::move(values), "ball(d=" + std::to_string(d) + ",m=" + std::to_string(spec.m) + ")",
                      spec.range_01);
}

SampledClass make_lattice(const GeneratorSpec& spec) {
  if (!(spec.V > 0.0) || !std::isfinite(spec.V)) throw std::invalid_argument("lattice_holder needs V > 0");
  if (spec.levels < 4) throw std::invalid_argument("lattice_holder needs at least 4 levels");
  if (spec.m < 1) throw std::invalid_argument("lattice_holder needs m >= 1");
  const double step = 0.5 * std::pow(1.0 / static_cast<double>(spec.levels), 1.0 / spec.V);
  auto rng = stream(spec.seed, kLatentStream);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  const auto points = uniform_sample(spec.n, spec.seed);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(spec.m), static_cast<Eigen::Index>(spec.n));
  std::vector<double> path(spec.levels);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    path[0] = unit(rng);
    for (std::size_t c = 1; c < spec.levels; ++c) {
      double v = path[c - 1] + step * jitter(rng);
      if (v < 0.0) v = -v;
      if (v > 1.0) v = 2.0 - v;
      path[c] = v;
    }
    for (std::size_t k = 0; k < spec.n; ++k) {
      const auto cell = std::min(spec.levels - 1, static_cast<std::size_t>(points[k] * static_cast<double>(spec.levels)));
      values(i, static_cast<Eigen::Index>(k)) = path[cell];
    }
  }
  return SampledClass(std::move(values), "lattice_holder(V=" + std::to_string(spec.V) + ")", true);
}

}  // namespace

GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "two_point") return GeneratorKind::two_point;
  if (name == "segment") return GeneratorKind::segment;
  if (name == "ball") return GeneratorKind::ball;
  if (name == "interval_indicators") return GeneratorKind::interval_indicators;
  if (name == "lattice_holder") return GeneratorKind::lattice_holder;
  throw std::invalid_argument("unknown generator kind '" + name + "'");
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::two_point: return "two_point";
    case GeneratorKind::segment: return "segment";
    case GeneratorKind::ball: return "ball";
    case GeneratorKind::interval_indicators: return "interval_indicators";
    case GeneratorKind::lattice_holder: return "lattice_holder";
  }
  return "unknown";
}

std::vector<double> uniform_sample(std::size_t n, std::uint64_t seed) {
  auto rng = stream(seed, kSampleStream);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> points(n);
  for (auto& p : points) p = unit(rng);
  std::sort(points.begin(), points.end());
  return points;
}

SampledClass generate(const GeneratorSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("sample size must be positive");
  switch (spec.kind) {
    case GeneratorKind::two_point: {
      if (!(spec.distance > 0.0) || !std::isfinite(spec.distance))
        throw std::invalid_argument("two_point distance must be positive");
      const double levels[] = {0.0, spec.distance};
      return SampledClass(constant_rows(levels, spec.n), "two_point", spec.distance <= 1.0);
    }
    case GeneratorKind::segment: {
      if (spec.m < 2) throw std::invalid_argument("segment needs m >= 2");
      std::vector<double> levels(spec.m);
      for (std::size_t j = 0; j < spec.m; ++j) levels[j] = static_cast<double>(j) / static_cast<double>(spec.m - 1);
      return SampledClass(constant_rows(levels, spec.n), "segment", true);
    }
    case GeneratorKind::ball:
      return make_ball(spec);
    case GeneratorKind::interval_indicators:
      if (spec.m < 1) throw std::invalid_argument("interval_indicators needs m >= 1");
      return IntervalFamily::evenly_spaced(spec.m).on_sample(uniform_sample(spec.n, spec.seed),
                                                             "interval_indicators(m=" + std::to_string(spec.m) + ")");
    case GeneratorKind::lattice_holder:
      return make_lattice(spec);
  }
  throw std::logic_error("unknown generator kind");
}

IntervalFamily::IntervalFamily(std::vector<double> thresholds) : thresholds_(std::move(thresholds)) {
  if (thresholds_.empty()) throw std::invalid_argument("interval family needs a threshold");
  for (double t : thresholds_)
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("thresholds must lie in [0, 1]");
}

IntervalFamily IntervalFamily::evenly_spaced(std::size_t m) {
  if (m < 1) throw std::invalid_argument("interval family needs m >= 1");
  if (m == 1) return IntervalFamily({0.5});
  std::vector<double> t(m);
  for (std::size_t j = 0; j < m; ++j) t[j] = static_cast<double>(j) / static_cast<double>(m - 1);
  return IntervalFamily(std::move(t));
}

SampledClass IntervalFamily::on_sample(std::span<const double> points, const std::string& label) const {
  Eigen::MatrixXd values(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < size(); ++j)
    for (std::size_t k = 0; k < points.size(); ++k)
      values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = points[k] <= thresholds_[j] ? 1.0 : 0.0;
  return SampledClass(std::move(values), label, true);
}

double IntervalFamily::l1_distance(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != size() || b.size() != size()) throw std::invalid_argument("weight vector has the wrong length");
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return thresholds_[i] < thresholds_[j]; });
  // On (t_(k-1), t_(k)] the difference equals the sum of weights with t_j >= x.
  double suffix = 0.0;
  for (std::size_t j = 0; j < size(); ++j) suffix += a[j] - b[j];
  double total = 0.0;
  double left = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    const std::size_t j = order[k];
    total += (thresholds_[j] - left) * std::abs(suffix);
    suffix -= a[j] - b[j];
    left = thresholds_[j];
  }
  return total;
}

}  // namespace hullmod

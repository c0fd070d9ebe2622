#include "hullmod/process.hpp"

#include "hullmod/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hullmod {

namespace {

std::size_t knot_at_or_below(std::span<const double> grid, double x) {
  // Grids may be ascending or descending; pick the largest knot <= x.
  std::size_t best = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] <= x && (best == grid.size() || grid[i] > grid[best])) best = i;
  if (best == grid.size()) throw std::out_of_range("delta below the smallest modulus knot");
  return best;
}

void require_draws(std::size_t n_draws) {
  if (n_draws < 1) throw std::invalid_argument("at least one Monte Carlo draw is required");
}

}  // namespace

double ModulusCurve::at(double delta) const { return estimates[knot_at_or_below(deltas, delta)]; }

double ModulusCurve::std_error_at(double delta) const { return std_errors[knot_at_or_below(deltas, delta)]; }

ModulusCurve ModulusSamples::summarize() const {
  ModulusCurve curve;
  curve.deltas = deltas;
  curve.n_draws = static_cast<std::size_t>(suprema.rows());
  curve.seed = seed;
  std::vector<double> column(static_cast<std::size_t>(suprema.rows()));
  for (Eigen::Index j = 0; j < suprema.cols(); ++j) {
    for (Eigen::Index k = 0; k < suprema.rows(); ++k) column[static_cast<std::size_t>(k)] = suprema(k, j);
    const auto est = mean_with_error(column);
    curve.estimates.push_back(est.estimate);
    curve.std_errors.push_back(est.std_error);
  }
  return curve;
}

MeanEstimate mean_with_error(std::span<const double> samples) {
  MeanEstimate out;
  if (samples.empty()) return out;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (double x : samples) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  out.estimate = mean;
  if (count > 1) {
    const double var = m2 / static_cast<double>(count - 1);
    out.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(count));
  }
  return out;
}

void fill_noise(ProcessKind kind, std::uint64_t stream_seed, std::span<double> noise) {
  std::mt19937_64 engine(stream_seed);
  if (kind == ProcessKind::gaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& z : noise) z = normal(engine);
  } else {
    // 64 signs per engine call.
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < noise.size(); ++k) {
      if (k % 64 == 0) bits = engine();
      noise[k] = (bits & 1u) ? 1.0 : -1.0;
      bits >>= 1;
    }
  }
}

Eigen::VectorXd process_values(const SampledClass& cls, ProcessKind kind, std::span<const double> noise) {
  if (noise.size() != cls.sample_size()) throw std::invalid_argument("noise length must equal sample size");
  Eigen::Map<const Eigen::VectorXd> z(noise.data(), static_cast<Eigen::Index>(noise.size()));
  const double n = static_cast<double>(cls.sample_size());
  const double scale = kind == ProcessKind::gaussian ? 1.0 / std::sqrt(n) : 1.0 / n;
  return scale * (cls.values() * z);
}

ProcessDraw draw_process(const SampledClass& cls, ProcessKind kind, std::uint64_t seed) {
  ProcessDraw draw;
  draw.kind = kind;
  draw.noise.resize(cls.sample_size());
  fill_noise(kind, draw_seed(seed, 0), draw.noise);
  const Eigen::VectorXd v = process_values(cls, kind, draw.noise);
  draw.values.assign(v.data(), v.data() + v.size());
  return draw;
}

SortedPairs::SortedPairs(const EmpiricalGeometry& geometry) {
  const std::size_t m = geometry.size();
  struct Pair {
    double d;
    std::uint32_t i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      pairs.push_back({geometry.distance(i, j), static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  first_.reserve(pairs.size());
  second_.reserve(pairs.size());
  distance_.reserve(pairs.size());
  for (const auto& p : pairs) {
    first_.push_back(p.i);
    second_.push_back(p.j);
    distance_.push_back(p.d);
  }
}

std::size_t SortedPairs::count_within(double delta) const {
  return static_cast<std::size_t>(std::upper_bound(distance_.begin(), distance_.end(), delta) - distance_.begin());
}

ModulusSamples modulus_finite_samples(const SampledClass& cls, std::span<const double> delta_grid,
                                      std::size_t n_draws, std::uint64_t seed, unsigned threads) {
  require_draws(n_draws);
  for (double d : delta_grid)
    if (!(d >= 0.0)) throw std::invalid_argument("modulus deltas must be nonnegative");

  const EmpiricalGeometry geometry(cls);
  const SortedPairs pairs(geometry);
  std::vector<std::size_t> prefix(delta_grid.size());
  std::size_t needed = 0;
  for (std::size_t j = 0; j < delta_grid.size(); ++j) {
    prefix[j] = pairs.count_within(delta_grid[j]);
    needed = std::max(needed, prefix[j]);
  }
  // Query positions in ascending order of prefix length.
  std::vector<std::size_t> query(delta_grid.size());
  std::iota(query.begin(), query.end(), std::size_t{0});
  std::sort(query.begin(), query.end(), [&](std::size_t a, std::size_t b) { return prefix[a] < prefix[b]; });

  ModulusSamples out;
  out.deltas.assign(delta_grid.begin(), delta_grid.end());
  out.seed = seed;
  out.suprema.resize(static_cast<Eigen::Index>(n_draws), static_cast<Eigen::Index>(delta_grid.size()));

  const auto first = pairs.first();
  const auto second = pairs.second();
  parallel_for(n_draws, threads, [&](std::size_t k) {
    std::vector<double> noise(cls.sample_size());
    fill_noise(ProcessKind::gaussian, draw_seed(seed, k), noise);
    const Eigen::VectorXd w = process_values(cls, ProcessKind::gaussian, noise);
    double running = 0.0;
    std::size_t pos = 0;
    for (std::size_t q : query) {
      for (; pos < prefix[q]; ++pos) running = std::max(running, std::abs(w[first[pos]] - w[second[pos]]));
      out.suprema(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(q)) = running;
    }
  });
  return out;
}

ModulusCurve modulus_finite(const SampledClass& cls, std::span<const double> delta_grid, std::size_t n_draws,
                            std::uint64_t seed, unsigned threads) {
  return modulus_finite_samples(cls, delta_grid, n_draws, seed, threads).summarize();
}

MeanEstimate localized_rademacher_finite(const SampledClass& cls, double r, std::size_t n_draws,
                                         std::uint64_t seed, unsigned threads) {
  require_draws(n_draws);
  if (!cls.range_checked()) throw std::invalid_argument("localized Rademacher complexity needs a range-checked class");
  if (!(r >= 0.0)) throw std::invalid_argument("localization radius must be nonnegative");
  const Eigen::VectorXd means = cls.row_means();
  std::vector<Eigen::Index> admissible;
  for (Eigen::Index i = 0; i < means.size(); ++i)
    if (means[i] <= r) admissible.push_back(i);

  std::vector<double> per_draw(n_draws, 0.0);
  if (!admissible.empty()) {
    parallel_for(n_draws, threads, [&](std::size_t k) {
      std::vector<double> noise(cls.sample_size());
      fill_noise(ProcessKind::rademacher, draw_seed(seed, k), noise);
      const Eigen::VectorXd rn = process_values(cls, ProcessKind::rademacher, noise);
      double best = 0.0;
      for (auto i : admissible) best = std::max(best, std::abs(rn[i]));
      per_draw[k] = best;
    });
  }
  return mean_with_error(per_draw);
}

FrozenFiniteRademacher::FrozenFiniteRademacher(const SampledClass& cls, std::size_t n_draws, std::uint64_t seed) {
  require_draws(n_draws);
  if (!cls.range_checked()) throw std::invalid_argument("localized Rademacher complexity needs a range-checked class");
  const Eigen::VectorXd means = cls.row_means();
  const auto m = static_cast<std::size_t>(means.size());
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return means[static_cast<Eigen::Index>(a)] < means[static_cast<Eigen::Index>(b)];
  });
  for (auto i : order) sorted_means_.push_back(means[static_cast<Eigen::Index>(i)]);

  prefix_max_.resize(static_cast<Eigen::Index>(n_draws), static_cast<Eigen::Index>(m));
  std::vector<double> noise(cls.sample_size());
  for (std::size_t k = 0; k < n_draws; ++k) {
    fill_noise(ProcessKind::rademacher, draw_seed(seed, k), noise);
    const Eigen::VectorXd rn = process_values(cls, ProcessKind::rademacher, noise);
    double running = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
      running = std::max(running, std::abs(rn[static_cast<Eigen::Index>(order[p])]));
      prefix_max_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(p)) = running;
    }
  }
}

MeanEstimate FrozenFiniteRademacher::operator()(double r) const {
  if (!(r >= 0.0)) throw std::invalid_argument("localization radius must be nonnegative");
  const auto count =
      static_cast<std::size_t>(std::upper_bound(sorted_means_.begin(), sorted_means_.end(), r) - sorted_means_.begin());
  std::vector<double> per_draw(static_cast<std::size_t>(prefix_max_.rows()), 0.0);
  if (count > 0)
    for (Eigen::Index k = 0; k < prefix_max_.rows(); ++k)
      per_draw[static_cast<std::size_t>(k)] = prefix_max_(k, static_cast<Eigen::Index>(count - 1));
  return mean_with_error(per_draw);
}

}  // namespace hullmod

#include "hullmod/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hullmod {

namespace {

struct Traversal {
  std::vector<std::size_t> centers;
  std::vector<double> insertion_radius;  // +inf for the seed
  std::vector<double> min_distance;      // per member, to the current centers
  std::vector<std::size_t> nearest;      // per member, position in `centers`
};

// Farthest-first traversal over `members` (row indices) until every member is
// within `stop_radius` of a center. `seed` must be one of the members.
template <class Metric>
Traversal farthest_first(const Metric& geometry, std::span<const std::size_t> members,
                         std::size_t seed, double stop_radius) {
  Traversal t;
  const std::size_t count = members.size();
  t.min_distance.assign(count, std::numeric_limits<double>::infinity());
  t.nearest.assign(count, 0);

  std::size_t next = seed;
  double next_radius = std::numeric_limits<double>::infinity();
  for (;;) {
    t.centers.push_back(next);
    t.insertion_radius.push_back(next_radius);
    const std::size_t pos = t.centers.size() - 1;
    for (std::size_t k = 0; k < count; ++k) {
      const double d = geometry.distance(members[k], next);
      if (d < t.min_distance[k]) {
        t.min_distance[k] = d;
        t.nearest[k] = pos;
      }
    }
    double far = -1.0;
    std::size_t far_row = 0;
    for (std::size_t k = 0; k < count; ++k) {
      const double d = t.min_distance[k];
      if (d > far || (d == far && members[k] < far_row)) {
        far = d;
        far_row = members[k];
      }
    }
    if (far <= stop_radius) break;
    next = far_row;
    next_radius = far;
  }
  return t;
}

std::size_t lexicographic_seed(std::span<const std::size_t> members, const std::vector<std::size_t>& rank) {
  return *std::min_element(members.begin(), members.end(),
                           [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
}

std::vector<std::size_t> rank_of(const std::vector<std::size_t>& order) {
  std::vector<std::size_t> rank(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

std::vector<std::size_t> all_rows(std::size_t m) {
  std::vector<std::size_t> rows(m);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

void require_positive(double eps, const char* what) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

std::size_t net_size_within(const EmpiricalGeometry& geometry, std::span<const std::size_t> members,
                            const std::vector<std::size_t>& rank, double eps) {
  return farthest_first(geometry, members, lexicographic_seed(members, rank), eps).centers.size();
}

template <class Metric>
EpsNet greedy_net_with(const SampledClass& cls, const Metric& geometry, double eps) {
  require_positive(eps, "net radius");
  const auto members = all_rows(cls.num_functions());
  const auto order = lexicographic_order(cls);
  const Traversal t = farthest_first(geometry, members, order.front(), eps);

  EpsNet net;
  net.radius = eps;
  net.center_indices = t.centers;
  net.assignment.resize(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) net.assignment[k] = t.centers[t.nearest[k]];
  return net;
}

template <class Metric>
CoveringCurve covering_curve_with(const SampledClass& cls, const Metric& geometry, std::span<const double> eps_grid) {
  if (eps_grid.empty()) throw std::invalid_argument("covering curve needs a nonempty grid");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    require_positive(eps_grid[i], "grid value");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) {
      throw std::invalid_argument("covering grid must be strictly decreasing");
    }
  }
  // One traversal down to the finest radius; greedy_net(eps) is the prefix of
  // centers inserted at a radius strictly greater than eps.
  const auto members = all_rows(cls.num_functions());
  const auto order = lexicographic_order(cls);
  const Traversal t = farthest_first(geometry, members, order.front(), eps_grid.back());

  CoveringCurve curve;
  curve.epsilons.assign(eps_grid.begin(), eps_grid.end());
  std::size_t running = 1;
  for (double eps : eps_grid) {
    const auto raw = static_cast<std::size_t>(
        std::count_if(t.insertion_radius.begin(), t.insertion_radius.end(), [&](double r) { return r > eps; }));
    running = std::max(running, raw);
    curve.sizes.push_back(running);
    curve.entropies.push_back(std::log(static_cast<double>(running)));
  }
  return curve;
}

template <class Metric>
void check_net_with(const EpsNet& net, const Metric& geometry) {
  for (std::size_t row = 0; row < net.assignment.size(); ++row) {
    const double d = geometry.distance(row, net.assignment[row]);
    if (!(d <= net.radius)) {
      std::ostringstream msg;
      msg << "cover violated: row " << row << " is " << d << " from its center, radius " << net.radius;
      throw std::logic_error(msg.str());
    }
  }
  for (std::size_t a = 0; a < net.center_indices.size(); ++a)
    for (std::size_t b = a + 1; b < net.center_indices.size(); ++b) {
      const double d = geometry.distance(net.center_indices[a], net.center_indices[b]);
      if (!(d > net.radius)) {
        std::ostringstream msg;
        msg << "separation violated: centers " << net.center_indices[a] << " and " << net.center_indices[b]
            << " are " << d << " apart, radius " << net.radius;
        throw std::logic_error(msg.str());
      }
    }
}

}  // namespace

std::vector<std::size_t> lexicographic_order(const SampledClass& cls) {
  const auto& a = cls.values();
  std::vector<std::size_t> order = all_rows(cls.num_functions());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      const double x = a(static_cast<Eigen::Index>(i), k);
      const double y = a(static_cast<Eigen::Index>(j), k);
      if (x != y) return x < y;
    }
    return false;
  });
  return order;
}

EpsNet greedy_net(const SampledClass& cls, double eps) {
  return greedy_net(cls, EmpiricalGeometry(cls), eps);
}

EpsNet greedy_net(const SampledClass& cls, const EmpiricalGeometry& geometry, double eps) {
  return greedy_net_with(cls, geometry, eps);
}

EpsNet greedy_net(const SampledClass& cls, const RowCoordinates& coordinates, double eps) {
  return greedy_net_with(cls, coordinates, eps);
}

CoveringCurve covering_curve(const SampledClass& cls, std::span<const double> eps_grid) {
  return covering_curve(cls, EmpiricalGeometry(cls), eps_grid);
}

CoveringCurve covering_curve(const SampledClass& cls, const EmpiricalGeometry& geometry,
                             std::span<const double> eps_grid) {
  return covering_curve_with(cls, geometry, eps_grid);
}

CoveringCurve covering_curve(const SampledClass& cls, const RowCoordinates& coordinates,
                             std::span<const double> eps_grid) {
  return covering_curve_with(cls, coordinates, eps_grid);
}

double local_entropy(const SampledClass& cls, double delta, double eps) {
  return local_entropy(cls, EmpiricalGeometry(cls), delta, eps);
}

double local_entropy(const SampledClass& cls, const EmpiricalGeometry& geometry, double delta, double eps) {
  require_positive(delta, "ball radius");
  require_positive(eps, "net radius");
  const std::size_t m = cls.num_functions();
  const auto rank = rank_of(lexicographic_order(cls));
  std::size_t worst = 1;
  std::vector<std::size_t> ball;
  for (std::size_t f = 0; f < m; ++f) {
    ball.clear();
    for (std::size_t g = 0; g < m; ++g)
      if (geometry.distance(f, g) <= delta) ball.push_back(g);
    if (ball.size() <= worst) continue;
    worst = std::max(worst, net_size_within(geometry, ball, rank, eps));
  }
  return std::log(static_cast<double>(worst));
}

void check_net_invariants(const EpsNet& net, const EmpiricalGeometry& geometry) { check_net_with(net, geometry); }

void check_net_invariants(const EpsNet& net, const RowCoordinates& coordinates) { check_net_with(net, coordinates); }

std::vector<double> geometric_grid(double start, double stop, std::size_t count) {
  if (!(start > 0.0) || !(stop > 0.0)) throw std::invalid_argument("geometric grid bounds must be positive");
  if (count == 0) throw std::invalid_argument("geometric grid needs at least one point");
  if (count == 1) return {start};
  std::vector<double> grid(count);
  const double ratio = std::log(stop / start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start * std::exp(ratio * static_cast<double>(i));
  grid.back() = stop;
  return grid;
}

std::vector<double> dyadic_grid(int first, int last) {
  if (last < first) throw std::invalid_argument("dyadic grid needs last >= first");
  std::vector<double> grid;
  for (int k = first; k <= last; ++k) grid.push_back(std::ldexp(1.0, -k));
  return grid;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 4 && parts[0] == "geometric") {
      return geometric_grid(std::stod(parts[1]), std::stod(parts[2]),
                            static_cast<std::size_t>(std::stoul(parts[3])));
    }
    if (parts.size() == 3 && parts[0] == "dyadic") return dyadic_grid(std::stoi(parts[1]), std::stoi(parts[2]));
    if (parts.size() == 1) {
      std::vector<double> grid;
      std::stringstream list(text);
      while (std::getline(list, item, ',')) grid.push_back(std::stod(item));
      if (grid.empty()) throw std::invalid_argument("empty grid");
      return grid;
    }
  } catch (const std::logic_error&) {
    // fall through to the uniform message below
  }
  throw std::invalid_argument("cannot parse grid '" + text +
                              "' (expected geometric:START:STOP:COUNT, dyadic:FIRST:LAST or a comma list)");
}

}  // namespace hullmod

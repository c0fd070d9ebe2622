#include "hullmod/classdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hullmod {

namespace {

constexpr double kWeightSumTolerance = 1e-9;
constexpr double kNegativeDriftTolerance = 1e-12;

std::vector<double> parse_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      throw std::invalid_argument("empty cell on line " + std::to_string(line_no));
    }
    const auto last = cell.find_last_not_of(" \t\r");
    cell = cell.substr(first, last - first + 1);
    std::size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &consumed);
    } catch (const std::exception&) {
      throw std::invalid_argument("non-numeric cell '" + cell + "' on line " + std::to_string(line_no));
    }
    if (consumed != cell.size()) {
      throw std::invalid_argument("trailing characters in cell '" + cell + "' on line " +
                                  std::to_string(line_no));
    }
    row.push_back(v);
  }
  return row;
}

std::vector<std::vector<double>> read_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(parse_csv_line(line, line_no));
  }
  return rows;
}

}  // namespace

SampledClass::SampledClass(Eigen::MatrixXd values, std::string label, bool range_checked)
    : values_(std::move(values)), label_(std::move(label)), range_checked_(range_checked) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw std::invalid_argument("sampled class needs at least one function and one sample point");
  }
  if (!values_.allFinite()) {
    throw std::invalid_argument("sampled class '" + label_ + "' contains non-finite entries");
  }
  if (range_checked_ && (values_.minCoeff() < 0.0 || values_.maxCoeff() > 1.0)) {
    throw std::invalid_argument("sampled class '" + label_ + "' has entries outside [0,1]");
  }
}

Eigen::VectorXd SampledClass::row_means() const { return values_.rowwise().mean(); }

ConvexCombination::ConvexCombination(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("convex combination needs at least one weight");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("convex combination weights must be finite and nonnegative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument("convex combination weights must sum to 1");
  }
}

ConvexCombination ConvexCombination::vertex(std::size_t size, std::size_t index) {
  if (index >= size) throw std::invalid_argument("vertex index out of range");
  std::vector<double> w(size, 0.0);
  w[index] = 1.0;
  return ConvexCombination(std::move(w));
}

ConvexCombination ConvexCombination::uniform(std::size_t size) {
  if (size == 0) throw std::invalid_argument("convex combination needs at least one weight");
  return ConvexCombination(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

Eigen::MatrixXd empirical_gram(const SampledClass& cls) {
  const auto& a = cls.values();
  Eigen::MatrixXd g(a.rows(), a.rows());
  g.triangularView<Eigen::Lower>() = a * a.transpose() / static_cast<double>(a.cols());
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return g;
}

Eigen::VectorXd evaluate_combination(const SampledClass& cls, const ConvexCombination& combination) {
  if (combination.size() != cls.num_functions()) {
    throw std::invalid_argument("combination has " + std::to_string(combination.size()) +
                                " weights but class has " + std::to_string(cls.num_functions()) +
                                " functions");
  }
  const auto w = combination.weights();
  Eigen::Map<const Eigen::VectorXd> weights(w.data(), static_cast<Eigen::Index>(w.size()));
  return cls.values().transpose() * weights;
}

double empirical_norm(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s / static_cast<double>(values.size()));
}

EmpiricalGeometry::EmpiricalGeometry(const SampledClass& cls) : gram_(empirical_gram(cls)) {}

EmpiricalGeometry::EmpiricalGeometry(Eigen::MatrixXd gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols() || gram_.rows() < 1) {
    throw std::invalid_argument("Gram matrix must be square and nonempty");
  }
}

double EmpiricalGeometry::squared_distance(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  const double d2 = gram_(a, a) + gram_(b, b) - 2.0 * gram_(a, b);
  if (d2 >= 0.0) return d2;
  if (d2 >= -kNegativeDriftTolerance) return 0.0;
  throw std::runtime_error("Gram matrix is not positive semidefinite (squared distance " +
                           std::to_string(d2) + ")");
}

double EmpiricalGeometry::distance(std::size_t i, std::size_t j) const {
  return std::sqrt(squared_distance(i, j));
}

double EmpiricalGeometry::norm(std::size_t i) const {
  const auto a = static_cast<Eigen::Index>(i);
  return std::sqrt(std::max(0.0, gram_(a, a)));
}

double EmpiricalGeometry::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) best = std::max(best, squared_distance(i, j));
  return std::sqrt(best);
}

double EmpiricalGeometry::min_positive_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) {
      const double d2 = squared_distance(i, j);
      if (d2 > 0.0) best = std::min(best, d2);
    }
  return std::isinf(best) ? 0.0 : std::sqrt(best);
}

SampledClass load_class_csv(std::istream& in, std::string label, bool assert_range_01) {
  const auto rows = read_rows(in);
  if (rows.empty()) throw std::invalid_argument("class CSV is empty");
  const std::size_t n = rows.front().size();
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) {
      throw std::invalid_argument("class CSV row " + std::to_string(i + 1) + " has " +
                                  std::to_string(rows[i].size()) + " columns, expected " +
                                  std::to_string(n));
    }
    for (std::size_t k = 0; k < n; ++k)
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return SampledClass(std::move(values), std::move(label), assert_range_01);
}

SampledClass load_class_csv_file(const std::string& path, bool assert_range_01) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open class file '" + path + "'");
  return load_class_csv(in, path, assert_range_01);
}

std::vector<double> load_vector_csv(std::istream& in) {
  const auto rows = read_rows(in);
  std::vector<double> out;
  if (rows.size() == 1) return rows.front();
  for (const auto& r : rows) {
    if (r.size() != 1) throw std::invalid_argument("vector CSV must be a single row or a single column");
    out.push_back(r.front());
  }
  if (out.empty()) throw std::invalid_argument("vector CSV is empty");
  return out;
}

std::vector<double> load_vector_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file '" + path + "'");
  return load_vector_csv(in);
}

void write_class_csv(std::ostream& out, const SampledClass& cls) {
  const auto& a = cls.values();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (k) out << ',';
      out << a(i, k);
    }
    out << '\n';
  }
}

RowCoordinates::RowCoordinates(const SampledClass& cls) {
  const auto& a = cls.values();
  const double n = static_cast<double>(a.cols());
  Eigen::MatrixXd full;
  Eigen::VectorXd eigenvalues;
  if (a.cols() <= a.rows()) {
    // A = (A V) V^T with V the eigenvectors of A^T A.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.transpose() * a);
    eigenvalues = eig.eigenvalues();
    full = a * eig.eigenvectors() / std::sqrt(n);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a * a.transpose() / n);
    eigenvalues = eig.eigenvalues();
    full = eig.eigenvectors() * eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  const double top = eigenvalues.size() ? std::max(0.0, eigenvalues.maxCoeff()) : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    if (eigenvalues[k] > 1e-12 * top) keep.push_back(k);
  coords_.resize(a.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) coords_.col(static_cast<Eigen::Index>(k)) = full.col(keep[k]);
}

double RowCoordinates::distance(std::size_t i, std::size_t j) const {
  return (coords_.row(static_cast<Eigen::Index>(i)) - coords_.row(static_cast<Eigen::Index>(j))).norm();
}

}  // namespace hullmod

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hullmod {

/// A function class restricted to an n-point sample.
///
/// Row i holds f_i(x_1), ..., f_i(x_n). The ambient Hilbert space is
/// L2(P_n) with <f, g> = (1/n) sum_k f(x_k) g(x_k). Instances are
/// immutable after construction and may be shared freely across threads.
class SampledClass {
 public:
  /// Validates eagerly: m >= 1, n >= 1, every entry finite, and, when
  /// `range_checked` is set, every entry in [0, 1]. Throws
  /// std::invalid_argument otherwise.
  SampledClass(Eigen::MatrixXd values, std::string label, bool range_checked = false);

  std::size_t num_functions() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t sample_size() const { return static_cast<std::size_t>(values_.cols()); }

  const Eigen::MatrixXd& values() const { return values_; }
  const std::string& label() const { return label_; }
  bool range_checked() const { return range_checked_; }

  /// Empirical mean P_n f_i of every row.
  Eigen::VectorXd row_means() const;

 private:
  Eigen::MatrixXd values_;
  std::string label_;
  bool range_checked_;
};

/// Nonnegative weights summing to one (within 1e-9).
class ConvexCombination {
 public:
  explicit ConvexCombination(std::vector<double> weights);

  static ConvexCombination vertex(std::size_t size, std::size_t index);
  static ConvexCombination uniform(std::size_t size);

  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }

 private:
  std::vector<double> weights_;
};

/// Gram matrix (1/n) A A^T of the class in L2(P_n).
Eigen::MatrixXd empirical_gram(const SampledClass& cls);

/// sum_i weights[i] * row_i, a point of conv(F) evaluated on the sample.
Eigen::VectorXd evaluate_combination(const SampledClass& cls, const ConvexCombination& combination);

/// Empirical L2 norm ((1/n) sum_k v_k^2)^{1/2}.
double empirical_norm(std::span<const double> values);

/// Pairwise geometry of a sampled class, derived once from its Gram matrix.
///
/// Squared distances G_ii + G_jj - 2 G_ij that drift below zero by at
/// most 1e-12 are clamped to zero; anything more negative indicates a
/// broken Gram matrix and throws.
class EmpiricalGeometry {
 public:
  explicit EmpiricalGeometry(const SampledClass& cls);
  explicit EmpiricalGeometry(Eigen::MatrixXd gram);

  std::size_t size() const { return static_cast<std::size_t>(gram_.rows()); }
  const Eigen::MatrixXd& gram() const { return gram_; }

  double squared_distance(std::size_t i, std::size_t j) const;
  double distance(std::size_t i, std::size_t j) const;
  double norm(std::size_t i) const;

  /// Largest pairwise distance between rows; equals diam(conv F).
  double diameter() const;
  /// Smallest positive pairwise distance, or 0 when every row coincides.
  double min_positive_distance() const;

 private:
  Eigen::MatrixXd gram_;
};

/// Rows expressed in an orthonormal basis of their span, scaled so that
/// Euclidean distances between coordinate rows equal L2(P_n) distances.
/// Costs O(m r) memory for rank r instead of the O(m^2) Gram matrix, which
/// makes nets over very large classes affordable.
class RowCoordinates {
 public:
  explicit RowCoordinates(const SampledClass& cls);

  std::size_t size() const { return static_cast<std::size_t>(coords_.rows()); }
  std::size_t rank() const { return static_cast<std::size_t>(coords_.cols()); }
  const Eigen::MatrixXd& coordinates() const { return coords_; }

  double distance(std::size_t i, std::size_t j) const;

 private:
  Eigen::MatrixXd coords_;
};

/// Reads a class from CSV: one function per row, n columns, no header.
SampledClass load_class_csv(std::istream& in, std::string label, bool assert_range_01);
SampledClass load_class_csv_file(const std::string& path, bool assert_range_01);

/// Reads a single numeric row (or column) of values, e.g. a target vector.
std::vector<double> load_vector_csv(std::istream& in);
std::vector<double> load_vector_csv_file(const std::string& path);

void write_class_csv(std::ostream& out, const SampledClass& cls);

}  // namespace hullmod

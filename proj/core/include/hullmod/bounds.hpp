#pragma once

#include "hullmod/nets.hpp"
#include "hullmod/process.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace hullmod {

/// l(delta) = 2 log(pi / sqrt(3) * log2(2 / delta)), defined for 0 < delta <= 1.
double l_of_delta(double delta);

enum class PsiMethod { theorem1, entropy_integral, direct_mc };
std::string to_string(PsiMethod method);

/// Nonnegative, nondecreasing, concave x -> psi_n(x) with psi_n(0) = 0.
///
/// Evaluation goes through the stored evaluator; the grid/values pair is a
/// tabulation kept for validation and reporting.
class PsiFunction {
 public:
  PsiFunction(PsiMethod method, std::size_t n, std::function<double(double)> evaluator, std::vector<double> grid);

  double operator()(double x) const { return evaluator_(x); }

  PsiMethod method() const { return method_; }
  std::size_t sample_size() const { return n_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  /// Throws std::invalid_argument unless psi(0) = 0, the tabulation is
  /// nonnegative and nondecreasing, and midpoint concavity holds within tol.
  void validate(double tol = 1e-12) const;

  /// Piecewise linear through (grid, values), constant beyond the last knot.
  static PsiFunction from_table(PsiMethod method, std::size_t n, std::vector<double> grid,
                                std::vector<double> values);

 private:
  PsiMethod method_;
  std::size_t n_;
  std::function<double(double)> evaluator_;
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// sqrt(pi / (2n)) * min over candidate eps of omega(G, eps) + delta sqrt(N(G, eps)),
/// with the candidate rules of theorem1_bound.
double psi_theorem1(const ModulusCurve& modulus, const CoveringCurve& covering, std::size_t n, double delta);
PsiFunction make_psi_theorem1(ModulusCurve modulus, CoveringCurve covering, std::size_t n);

/// (4 sqrt(3) / sqrt(n)) * integral_0^{sqrt(delta)/2} H^{1/2}(u) du.
double psi_entropy(const CoveringCurve& covering, std::size_t n, double delta);
PsiFunction make_psi_entropy(CoveringCurve covering, std::size_t n);

/// Least concave majorant of x -> localized(x^2) tabulated on `grid`
/// (0 is added when missing).
PsiFunction make_psi_direct(const std::function<double(double)>& localized, std::size_t n, std::vector<double> grid);

enum class FixedPointEquation { generic, Uo, U, r, Uent, rent };
std::string to_string(FixedPointEquation equation);

struct FixedPointResult {
  double value = 0.0;
  FixedPointEquation equation = FixedPointEquation::generic;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool largest_verified = false;  // rhs(probe) < probe just above the value
  std::vector<double> trace;
  std::vector<std::pair<std::string, double>> components;  // right-hand side terms at the value
};

struct FixedPointOptions {
  double tolerance = 1e-8;
  std::size_t max_iterations = 100000;
  double probe_margin = 0.1;
};

/// Largest fixed point of a nondecreasing map on [0, r_max], found by the
/// monotone iteration r_{k+1} = rhs(r_k) from r_max.
FixedPointResult largest_fixed_point(const std::function<double(double)>& rhs, double r_max,
                                     FixedPointOptions options = {});

/// r = psi(sqrt r), started at max(1, psi(1)^2 + 1).
FixedPointResult solve_zero_error(const PsiFunction& psi, FixedPointOptions options = {});

/// Localization radius -> E sup_{P_n f <= radius} |R_n(f)|, nondecreasing.
using LocalizedOracle = std::function<double(double)>;

/// U = delta + 8 oracle(U) + sqrt(2 delta (t + l(delta)) / n) + 10 (t + l(delta)) / (3n).
FixedPointResult solve_U(double delta, double t, std::size_t n, const LocalizedOracle& oracle,
                         FixedPointOptions options = {});

/// r = delta + 8 oracle(U(2r)) + sqrt(4 r (t + l(2r)) / n) + 10 (t + l(2r)) / (3n).
/// l(2r) needs 2r <= 1, so the search runs on [0, 1/2]; a right-hand side
/// above 1/2 at r = 1/2 throws std::domain_error.
FixedPointResult solve_r(double delta, double t, std::size_t n, const LocalizedOracle& oracle,
                         FixedPointOptions options = {});

struct ConstantsProfile {
  double K_thm = 1.0;
  double K_1 = 1.0;
  double K_2 = 1.0;
  double K_rate = 1.0;
  std::string notes = "defaults";

  void validate() const;
  std::string to_json() const;
  static ConstantsProfile from_json(const std::string& text);
  static ConstantsProfile load(const std::string& path);
};

/// r_0 = (t + log log n) / n, n >= 3.
double r_zero(double t, std::size_t n);

/// U = K_1 (delta + psi(sqrt U) + r_0).
FixedPointResult solve_Uent(double delta, const PsiFunction& psi, double r0, const ConstantsProfile& profile,
                            FixedPointOptions options = {});

/// r = delta + K_2 (psi(sqrt U(2r)) + sqrt(r r_0) + r_0), U from solve_Uent.
FixedPointResult solve_rent(double delta, const PsiFunction& psi, double r0, const ConstantsProfile& profile,
                            FixedPointOptions options = {});

struct Certificate {
  double bound = 0.0;
  double r_hat = 0.0;
  double t = 0.0;
  std::size_t n = 0;
  double r0 = 0.0;
  double K = 1.0;
  double empirical_term = 0.0;  // K * P_n f in the per-function form, else 0
  std::string class_label;
  std::uint64_t seed = 0;
  ConstantsProfile profile;

  std::string to_json() const;
};

/// K_thm (r_hat + r_0).
Certificate certificate(const std::string& class_label, double t, std::size_t n, const FixedPointResult& r_hat,
                        const ConstantsProfile& profile, std::uint64_t seed = 0);

/// K_thm (P_n f + r_hat + r_0).
Certificate certificate_for_function(const std::string& class_label, double t, std::size_t n, double empirical_mean,
                                     const FixedPointResult& r_hat, const ConstantsProfile& profile,
                                     std::uint64_t seed = 0);

}  // namespace hullmod

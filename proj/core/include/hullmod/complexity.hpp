#pragma once

#include "hullmod/classdata.hpp"
#include "hullmod/nets.hpp"
#include "hullmod/process.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hullmod {

/// Closed-form rate curves for the worked examples.
///
///   ex1_poly_covering(V)  K x^{2/(2+V)} log^{V/(2+V)}(1/x)   hull modulus, N ~ x^{-V}
///   ex2_smallV(V)         K log^{1/2 - 1/V}(1/x)             hull modulus, H ~ x^{-V}, 0 < V < 2
///   ex2_Veq2              K log(1/x)                          V = 2, separated subset
///   ex2_bigV(V)           K x^{1 - V/2}                       V > 2, separated subset
///   hullentropy_ex1(V)    K x^{-2V/(2+V)} log^{2V/(2+V)}(1/x) hull entropy, N ~ x^{-V}
///   hullentropy_ex2(V)    K x^{-2} log^{1-V/2}(1/x)  (V < 2)
///                         K x^{-2} log^2(1/x)        (V = 2)
///                         K x^{-V}                   (V > 2)
enum class RateKind { ex1_poly_covering, ex2_smallV, ex2_Veq2, ex2_bigV, hullentropy_ex1, hullentropy_ex2 };

struct RateCurve {
  RateKind kind = RateKind::ex1_poly_covering;
  double exponent = 1.0;  // V
  double constant = 1.0;  // K
  double x_max = 0.36787944117144233;  // 1/e, keeps log(1/x) >= 1
};

/// Throws std::domain_error outside (0, x_max] or for a V the kind excludes.
double rate_reference(const RateCurve& curve, double x);

RateKind parse_rate_kind(const std::string& name);
std::string to_string(RateKind kind);

struct Theorem1Bound {
  double value = 0.0;
  double argmin_eps = 0.0;
  double modulus_term = 0.0;      // omega(F, eps*) at the minimizer
  double modulus_std_error = 0.0;
  std::size_t covering_size = 0;  // N(F, eps*) at the minimizer
};

/// min over candidate eps of 2 omega(F, eps) + delta sqrt(N(F, eps)).
///
/// Candidates are the modulus knots. The covering number at a knot is read
/// from the largest covering-grid value <= eps (covering numbers only grow as
/// eps shrinks, so this stays an upper bound); knots below the covering grid
/// are skipped.
Theorem1Bound theorem1_bound(const ModulusCurve& modulus, const CoveringCurve& covering, double delta);

/// Entropy H(F, u) implied by the curve as a step function: on
/// [eps_{i+1}, eps_i) it takes the value at eps_{i+1}; below the finest knot
/// it is held constant; above the coarsest knot it is 0 when the coarsest
/// size is 1 and an error otherwise.
double step_entropy(const CoveringCurve& covering, double u);

/// Exact integral of sqrt(H(F, u)) over [lower, upper] for the step entropy.
double dudley_integral(const CoveringCurve& covering, double lower, double upper);

/// max over the grid of eps sqrt(H(F, eps)), divided by sup_estimate.
double sudakov_ratio(const CoveringCurve& covering, double sup_estimate);

/// Terms 2^i omega(F, 2^{1-i}), i = 0..k. Throws std::out_of_range when a
/// dyadic knot is missing from the curve.
std::vector<double> chaining_terms(const ModulusCurve& modulus, int k);

/// sum_{i=0}^k 2^i omega(F, 2^{1-i}); the entropy chaining bound without its
/// constant, for a class rescaled to diameter 1.
double entropy_from_modulus(const ModulusCurve& modulus, int k);

/// sum_{i=0}^k 2^i omega(F^{2^{-i-1}}, 2^{2-i}), where level_moduli[i] is the
/// modulus curve of a maximal 2^{-i-1}-separated subset.
double entropy_from_separated_moduli(std::span<const ModulusCurve> level_moduli, int k);

/// Greedy separated subsets F^{2^{-i-1}} for i = 0..k with their moduli
/// estimated at 2^{2-i}, one independent estimate per level.
std::vector<ModulusCurve> separated_level_moduli(const SampledClass& cls, int k, std::size_t n_draws,
                                                 std::uint64_t seed);

/// Copy of the class scaled so that its diameter in L2(P_n) is exactly 1.
SampledClass rescaled_to_unit_diameter(const SampledClass& cls);

/// Modulus curve whose estimates are the given closed-form rate at each
/// knot, clamped to 0 where the closed form is undefined (x >= 1).
ModulusCurve reference_modulus(const RateCurve& curve, std::span<const double> knots);

}  // namespace hullmod

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "freepoints/forms.hpp"
#include "freepoints/reduction.hpp"

namespace freepoints {

// p^{−k(n−1)}·#{x ∈ (Z/p^k)ⁿ : f(x) ≡ 0 mod p^k}.  Diagonal forms are handled
// by convolving per-variable value counts; other forms by direct enumeration
// of p^{kn} residues against the budget.
Rational SigmaP(Form const& f, Integer p, int k, std::uint64_t budget = kDefaultNodeBudget);

// Same count restricted to x ≢ 0 mod p.  At primes of good reduction every
// such solution mod p is non-singular, so this is constant in k ≥ 1; the full
// count differs through the lifts of the cone vertex x ≡ 0.
Rational SigmaPPrimitive(Form const& f, Integer p, int k,
                         std::uint64_t budget = kDefaultNodeBudget);

// Coefficients in t of f(x', t), with x' ∈ R^{n−1} the leading coordinates.
using SlicePolynomial = std::function<std::vector<long double>(std::span<double const>)>;

struct SigmaInfOptions {
  std::vector<double> taus{1e-2, 1e-3};  // refinement sequence; the last one is reported
  int shifts = 16;                       // independent randomized sub-streams
  std::uint64_t points_per_shift = 1 << 12;
  std::uint64_t max_points_per_shift = 1 << 18;
  std::uint64_t seed = 20240611;
};

struct SigmaInfEstimate {
  double value = 0;        // vol{x ∈ unit ball : |f(x)| < τ}/(2τ) at the last τ
  double std_error = 0;
  double tau = 0;
  bool converged = true;   // consecutive τ estimates agree within 3 standard errors
  std::vector<double> tau_values;  // estimate per τ, in option order
  std::vector<double> tau_errors;
  std::uint64_t points_per_shift = 0;
  std::uint64_t seed = 0;
};

// Randomly shifted Halton points over x' in the unit ball of R^{n−1}; the
// window measure along the last coordinate is integrated exactly from the
// real roots of f(x', t) ∓ τ.  Points per shift double until the standard
// error is at most tol·|value| or the cap is reached.
SigmaInfEstimate SigmaInf(Form const& f, double tol, SigmaInfOptions const& options = {});
SigmaInfEstimate SigmaInf(int n_vars, SlicePolynomial const& slice, double tol,
                          SigmaInfOptions const& options = {});

struct DensityEstimate {
  std::map<Integer, Rational> sigma_p;
  std::map<Integer, int> levels;
  std::map<Integer, Rational> sigma_p_next;  // level k + 1, bad primes only
  SigmaInfEstimate sigma_inf;
  double product = 0;                        // σ_∞·Π σ_p
  Integer p_max = 0;
  std::vector<std::pair<Integer, double>> partial_products;  // σ_∞·Π_{q ≤ p} σ_q
  std::vector<Integer> bad_primes;
};

// Bad primes divide d·|Δ_f|, with Δ_f the supplied discriminant (or the closed
// form for diagonal forms); they are taken at level 2, all others at level 1.
DensityEstimate LeadingConstant(Form const& f, Integer p_max, double tol,
                                SigmaInfOptions const& options = {},
                                std::uint64_t budget = kDefaultNodeBudget);

std::string DensityJson(DensityEstimate const& estimate);

}  // namespace freepoints

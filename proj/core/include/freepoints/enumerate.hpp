#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "freepoints/forms.hpp"
#include "freepoints/reduction.hpp"
#include "freepoints/theta.hpp"

namespace freepoints {

// Region R/2 < ‖x‖ ≤ R.
struct Shell {
  double radius;
};

struct EnumerationPlan {
  enum class Method { kAuto, kNaive, kMeetInTheMiddle };

  double box_bound = 0;                // ‖x‖ ≤ B
  std::optional<Shell> shell;          // further restricts to the shell
  Method method = Method::kAuto;       // kAuto picks meet-in-the-middle for diagonal forms
  std::optional<int> split;            // meet-in-the-middle: variables [0, split) on the left
  bool primitive_only = true;
  std::uint64_t budget = kDefaultNodeBudget;

  // Throws `DomainError` for an inconsistent plan.
  void Validate(int n_vars) const;
};

struct EnumerationResult {
  std::vector<IntVector> points;  // lexicographically sorted, first non-zero entry positive
  bool complete = true;           // false when the budget ran out; points are then partial
  std::uint64_t budget_used = 0;
};

// Every non-zero x with f(x) = 0 in the plan's region, one representative per
// ± pair.  Never throws on budget exhaustion; check `complete`.
EnumerationResult EnumeratePoints(Form const& f, EnumerationPlan const& plan);

// Integer roots t ∈ [lo, hi] of Σ coefficients[k]·t^k (exact).
std::vector<Integer> IntegerRoots(std::vector<Wide> const& coefficients, Integer lo,
                                  Integer hi);

// Projective points of height ‖x‖ ≤ B.  Throws `BudgetExceeded` when the
// enumeration is incomplete.
std::int64_t CountNV(Form const& f, double bound,
                     std::uint64_t budget = kDefaultNodeBudget);

// Exact squared counts ‖x‖² ≤ B² and R²/4 < ‖x‖² ≤ R².
Integer MaxNormSq(double bound);
Integer ShellLowerNormSq(double radius);

// 𝖽(x)² = ‖∇f(x)‖² / gcd(∇f(x), Δ_f)²; the gcd is taken with Δ_f only when
// the form carries one.
Rational PointDeterminantSq(Form const& f, std::span<Integer const> x);
double PointDeterminant(Form const& f, std::span<Integer const> x);

struct EStarResult {
  std::int64_t count = 0;                 // projective points in the shell with s_{n−1} > R^{1−ε}
  std::int64_t shell_points = 0;          // projective points in the shell
  double majorant = 0;                    // 1 + Σ skew_majorant(Λ_x, R^{1−ε})
  std::vector<IntVector> skew_points;
};

// E*_{V,ε}(R) with the theta majorant evaluated over the same points.  The
// majorant uses the dual-series form of the Gaussian bound, including the
// exp(π(n−1)²) factor.
EStarResult CountEStar(Form const& f, double radius, double epsilon,
                       double tol = kDefaultThetaTol,
                       std::uint64_t budget = kDefaultNodeBudget);

struct MoebiusCheck {
  double direct = 0;     // Σ over primitive x ∼ R of 𝖽(x)·θ_{Λ_x}(R^{1−ε})
  double inverted = 0;   // Σ_k μ(k) Σ over all x ∼ R/k of 𝖽(kx)·θ_{Λ_x}(R^{1−ε})
  double residual = 0;
  double tolerance_budget = 0;  // 4·tol·(Σ of 𝖽-weights over both sides)
  int terms = 0;                // theta evaluations performed
};

MoebiusCheck MoebiusIdentityCheck(Form const& f, double radius, double epsilon,
                                  double tol = kDefaultThetaTol,
                                  std::uint64_t budget = kDefaultNodeBudget);

// #{(x, y) ∈ Zⁿ×Zⁿ : f(x) = 0, x ≠ 0, y·∇f(x) = 0, ‖x‖ ≤ B, ‖y‖ ≤ Y}.
std::int64_t CountTangentPairs(Form const& f, double bound, double y_bound,
                               bool primitive_only = false,
                               std::uint64_t budget = kDefaultNodeBudget);

}  // namespace freepoints

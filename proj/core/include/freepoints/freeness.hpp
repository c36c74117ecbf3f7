#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "freepoints/enumerate.hpp"
#include "freepoints/forms.hpp"
#include "freepoints/lattices.hpp"

namespace freepoints {

// Λ_x = {y ∈ Zⁿ : y·∇f(x) = 0}, the kernel of ∇f(x)/gcd(∇f(x)).
Lattice PointLattice(Form const& f, std::span<Integer const> x);

// value ≤ base^exponent for positive rationals.  Exact whenever the exponent
// is within 1e-12 of a rational p/q with q ≤ 10⁴ (all decimal thresholds used
// in practice); otherwise decided in long double.
bool PowerAtMost(Rational const& value, Rational const& base, double exponent);

struct PointRecord {
  IntVector x;
  Integer norm_sq = 0;
  Integer grad_gcd = 0;
  Rational det_sq;
  std::vector<Rational> minima_sq;  // s_1² … s_{n−1}² of Λ_x
  double freeness = 0;              // ℓ̃(x)
};

// Requires x primitive, f(x) = 0 and ‖x‖ > 1.
PointRecord MakePointRecord(Form const& f, std::span<Integer const> x, Budget& budget);

// ℓ̃(x) = (log‖x‖ − log s_{n−1}(Λ_x)) / log‖x‖.
double FreenessTilde(Form const& f, std::span<Integer const> x, Budget& budget);
double FreenessTilde(Form const& f, std::span<Integer const> x);

// s_{n−1}(Λ_x) ≤ ‖x‖^{1−ε}, decided on exact squares; ties count as free.
bool IsFree(PointRecord const& record, double epsilon);
// ℓ̃(x) ≥ ε from the floating value, deferring to `IsFree` within 1e-12 of the
// boundary.  Agrees with `IsFree` on every input.
bool IsFreeByValue(PointRecord const& record, double epsilon);

// Λ_x / Zx with the renormalized quotient metric (rank n − 2).
Lattice TangentQuotient(Form const& f, std::span<Integer const> x);

struct SurveyConfig {
  double bound = 20;
  double epsilon = 0;
  EnumerationPlan::Method method = EnumerationPlan::Method::kAuto;
  bool tangent_check = false;  // evaluate the quotient-lattice surrogate inequality
  std::uint64_t budget = kDefaultNodeBudget;
};

struct SurveyResult {
  int n_vars = 0;
  int degree = 0;
  double bound = 0;
  double epsilon = 0;
  std::vector<PointRecord> records;       // ‖x‖ > 1, in enumeration order
  std::vector<IntVector> excluded;        // points with ‖x‖ ≤ 1
  std::int64_t n_total = 0;               // N_V(B), including excluded points
  std::int64_t n_free = 0;                // ℓ̃ ≥ ε
  std::int64_t n_skew = 0;                // ℓ̃ < ε
  std::map<int, std::int64_t> histogram;  // bin k counts ℓ̃ ∈ [0.05k, 0.05(k+1))
  double median = 0;
  double mean = 0;
  double reference = 0;                   // (n − d)/(n − 1)
  std::int64_t tangent_checked = 0;
  std::vector<IntVector> tangent_violations;
  std::uint64_t budget_used = 0;
};

inline constexpr double kHistogramWidth = 0.05;

SurveyResult FreenessSurvey(Form const& f, SurveyConfig const& config);

// One row per record: x,norm_sq,grad_gcd,det_sq,s1_sq,…,s{n−1}_sq,freeness.
std::string SurveyCsv(SurveyResult const& survey);
std::string SurveyJson(SurveyResult const& survey);

}  // namespace freepoints

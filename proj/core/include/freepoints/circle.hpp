#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "freepoints/forms.hpp"
#include "freepoints/reduction.hpp"

namespace freepoints {

enum class NormKind { kEuclidean, kMax };

// Circle-method scales: X = R/k, Y = R^{1−ε}.
struct ArcConfig {
  double x_scale = 1;   // X
  double y_scale = 1;   // Y
  double radius = 1;    // R
  int k = 1;
  double epsilon = 0;
  double eta = 0.1;
  double c_f = 1;       // major-arc width constant
  int degree = 3;

  static ArcConfig FromRadius(double radius, int k, double epsilon, double eta, double c_f,
                              int degree);
  void Validate() const;
  // 1/(C_f X^{d−1})
  double ArcWidth() const;
  // Y^{1−η}
  double DenominatorBound() const;
};

struct RationalApprox {
  Integer a = 0;
  Integer q = 1;
  double remainder = 0;  // α − a/q, reduced so that 0 ≤ a < q
};

// Coprime a/q with q ≤ Q and |α − a/q| ≤ 1/(qQ), from the continued
// fraction of the exact binary value of α.
RationalApprox DirichletApprox(double alpha, double q_bound);

// Smallest-q witness (a, q), gcd(a, q) = 1, 0 ≤ a < q ≤ Y^{1−η}, with
// |qβ − a| ≤ 1/(C_f X^{d−1}); nullopt on the minor arcs.
std::optional<RationalApprox> IsMajorArc(double beta, ArcConfig const& config);

struct SBetaValue {
  double direct = 0;   // Re Σ_y ω(y/Y) e(β y·∇f(x)), tail ≤ tol
  double poisson = 0;  // Y^n ω(Y⟨β∂₁f⟩, …, Y⟨β∂ₙf⟩)
};

SBetaValue SBeta(Form const& f, std::span<Integer const> x, double beta, double y_scale,
                 double tol = 1e-10);
// Same, with ∇f(x) supplied.
SBetaValue SBetaForGradient(std::span<Integer const> gradient, double beta, double y_scale,
                            double tol = 1e-10);

struct MajorArcIntegral {
  double integral = 0;
  double prediction = 0;         // Y^{n−1}·gcd(∇f(x))/‖∇f(x)‖
  double relative_deviation = 0;
  bool flagged = false;          // gcd(∇f(x))·C_f² > Y^{1−η}
  int arcs = 0;
  Integer grad_gcd = 0;
};

// Adaptive Simpson over the modified major arcs a/q + θ, q | gcd(∇f(x)),
// |θ| ≤ min(Y^{−1+η}/‖∇f(x)‖, 1/(q C_f X^{d−1})), taken on R/Z.  Throws
// `DomainError` when two arcs overlap (C_f too small).  `tol` is relative to
// the prediction.
MajorArcIntegral MajorArcIntegrate(Form const& f, std::span<Integer const> x,
                                   ArcConfig const& config, double tol = 1e-6);

// 2·max(4·max‖∇f(x)‖_∞/X^{d−1}, X^{d−1}/min‖∇f(x)‖, 2Y^{1−η}/X^{d−1}) over the
// sample points: the smallest constant keeping the major arcs disjoint and the
// gradient bounds usable, doubled.
double CalibrateArcConstant(Form const& f, std::span<IntVector const> points,
                            ArcConfig const& config);

// 𝓜(τ;P,Q): tuples (u₁,…,u_{d−1}) with ‖uᵢ‖ < P and ⟨τ m_j(u)⟩ < 1/Q for all j.
std::int64_t CountM(double tau, Form const& f, double p, double q,
                    NormKind norm = NormKind::kEuclidean,
                    std::uint64_t budget = kDefaultNodeBudget);
// Tuples with ‖uᵢ‖ < U and m_j(u) = 0 for all j.
std::int64_t CountMultilinearZeros(Form const& f, double u,
                                   NormKind norm = NormKind::kEuclidean,
                                   std::uint64_t budget = kDefaultNodeBudget);

// #{x ∈ Zⁿ : ‖x‖ < P, maxᵢ ⟨(γx)ᵢ⟩ < 1/Q}.
std::int64_t CountShrink(std::vector<std::vector<double>> const& gamma, double p, double q,
                         NormKind norm = NormKind::kEuclidean,
                         std::uint64_t budget = kDefaultNodeBudget);
// N_{γ,P,Q} / N_{γ,θP,Q/θ}.
double ShrinkRatio(std::vector<std::vector<double>> const& gamma, double p, double q,
                   double theta, NormKind norm = NormKind::kEuclidean,
                   std::uint64_t budget = kDefaultNodeBudget);

// Integer points u with ‖u‖ < P (strict), in lexicographic order.
std::vector<IntVector> OpenBallPoints(int n, double p, NormKind norm, Budget& budget);

struct Lemma23Hypotheses {
  bool m_bounded = false;        // |m| ≤ M
  bool near_integer = false;     // ⟨αm⟩ < 1/R with α = a/q + z
  bool z_small = false;          // |z| ≤ 1/(2qM)
  bool q_small = false;          // q ≤ R/2
  bool q_large = false;          // q > min{M, 1/(|z|R)}
  bool all() const { return m_bounded && near_integer && z_small && q_small && q_large; }
};

// Exact evaluation (z, M, R taken at their binary values).  Throws
// `DomainError` unless gcd(a, q) = 1.
Lemma23Hypotheses Lemma23Check(Integer m, Integer a, Integer q, double z, double m_bound,
                               double r);
bool Lemma23Holds(Integer m, Integer a, Integer q, double z, double m_bound, double r);

// (2n − 3(d−1)2^d) / (n(d²−2d+3) − 3(d−1)2^d).  Throws `DomainError` when the
// denominator vanishes.
Rational CDn(int d, int n);
// n / (2^{d−1}(d−1))
Rational ExponentD(int d, int n);
// n / (2^{d−2}(d−1))
Rational ExponentE(int d, int n);

}  // namespace freepoints

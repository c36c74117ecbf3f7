#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freepoints/arith.hpp"
#include "freepoints/reduction.hpp"

namespace freepoints {

// A lattice of rank r in Q^n given by r independent basis vectors (stored as
// rows).  The metric is ‖v‖² = scale_sq · (v·v); scale_sq ≠ 1 only for the
// renormalized quotient lattices.
class Lattice {
 public:
  explicit Lattice(std::vector<RationalVector> basis, Rational scale_sq = 1);

  static Lattice FromIntegers(std::vector<IntVector> const& basis);
  static Lattice Standard(int n);
  // Rows separated by ';' or '|', entries by spaces or commas, entries are integers
  // or "p/q": "1 0; 0 5" is the lattice with basis (1,0),(0,5).
  static Lattice Parse(std::string_view literal);

  int ambient_dim() const { return ambient_dim_; }
  int rank() const { return static_cast<int>(basis_.size()); }
  std::vector<RationalVector> const& basis() const { return basis_; }
  // Unscaled B·Bᵀ (rows as vectors).
  RationalMatrix const& gram() const { return gram_; }
  Rational const& scale_sq() const { return scale_sq_; }

  // Lattice with basis λ·B (same metric scale).
  Lattice Scaled(Rational const& lambda) const;
  // Same lattice, LLL-reduced basis.
  Lattice Reduced() const;

  RationalVector Vector(std::span<Integer const> coefficients) const;
  // Squared norm including the metric scale.
  Rational NormSq(RationalVector const& v) const;
  // Integer coordinates of v, or nullopt when v ∉ Λ.
  std::optional<IntVector> Coordinates(RationalVector const& v) const;
  bool Contains(RationalVector const& v) const { return Coordinates(v).has_value(); }

  std::string ToString() const;

 private:
  int ambient_dim_;
  std::vector<RationalVector> basis_;
  RationalMatrix gram_;
  Rational scale_sq_;
};

// LLL-reduced integral Gram data for a lattice: the working Gram equals
// denominator · gram(), and ‖v‖² = unit · (Gram-unit squared norm) with
// unit = scale_sq / denominator.
class ReducedGram {
 public:
  explicit ReducedGram(Lattice const& lattice);

  WorkingBasis& working() { return working_; }
  WorkingBasis const& working() const { return working_; }
  Rational const& unit() const { return unit_; }
  long double unit_ld() const { return unit_ld_; }

  Rational ExactNormSq(std::span<Integer const> working_coefficients) const;
  RationalVector AmbientVector(std::span<Integer const> working_coefficients) const;

 private:
  Lattice lattice_;
  mpz_class denominator_;
  Rational unit_;
  long double unit_ld_;
  WorkingBasis working_;
};

struct MinimaProfile {
  std::vector<Rational> minima_sq;        // s_k², non-decreasing
  std::vector<RationalVector> witnesses;  // ambient vectors achieving them
  std::vector<IntVector> coordinates;     // the witnesses in the lattice basis
};

// {x ∈ Zⁿ : c·x = 0} for primitive c ≠ 0, with an LLL-reduced integral basis.
Lattice KernelLattice(std::span<Integer const> c);

// det(Λ)² = scale_sq^r · det(B Bᵀ).
Rational DeterminantSq(Lattice const& lattice);

// Exact successive minima.  Throws `BudgetExceeded` when the enumeration
// would visit more than budget.limit() nodes.
MinimaProfile SuccessiveMinima(Lattice const& lattice, Budget& budget);
MinimaProfile SuccessiveMinima(Lattice const& lattice);

Lattice Dual(Lattice const& lattice);

// The quotient Λ/Zx realized by projecting a complement of x orthogonally to
// x, with metric scale 1/|x|² so that ‖y + Zx‖ = min_t ‖y − t x‖ / ‖x‖.
// Throws `DomainError` unless x is a primitive vector of Λ.
Lattice QuotientModVector(Lattice const& lattice, RationalVector const& x);

// #{y ∈ Λ : ‖y‖² ≤ radius_sq}, exact.
std::int64_t CountLatticePoints(Lattice const& lattice, Rational const& radius_sq,
                                Budget& budget);

// Same set of vectors and the same metric.
bool SameLattice(Lattice const& a, Lattice const& b);

// Volume of the Euclidean unit ball in R^r.
double UnitBallVolume(int r);

}  // namespace freepoints

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "freepoints/arith.hpp"

namespace freepoints {

struct Monomial {
  Integer coefficient;
  std::vector<int> exponents;  // length n_vars, entries sum to the degree
};

// A homogeneous integer polynomial of degree d ≥ 3 in n variables, held both
// as a list of monomials and as the symmetric coefficient tensor
//   f(x) = Σ_{j₁…j_d} c_{j₁…j_d} x_{j₁}⋯x_{j_d}.
// Immutable; every query is a pure function.
class Form {
 public:
  // Like monomials are merged and zero coefficients dropped.  Throws
  // `DomainError` if the monomials are not all of one degree ≥ 3.
  Form(int n_vars, std::vector<Monomial> monomials,
       std::optional<mpz_class> discriminant_abs = std::nullopt);

  // Σ aᵢ xᵢ^d.
  static Form Diagonal(std::vector<Integer> const& coefficients, int degree);

  // Text format, one monomial per line: `c e1 e2 ... en`.  Lines starting
  // with '#' and blank lines are ignored.
  static Form Parse(std::istream& in);
  static Form Load(std::filesystem::path const& path);

  int n_vars() const { return n_vars_; }
  int degree() const { return degree_; }
  std::vector<Monomial> const& monomials() const { return monomials_; }

  // Keys are sorted index tuples j₁ ≤ … ≤ j_d.
  std::map<std::vector<int>, Rational> const& symmetric_coefficients() const {
    return symmetric_;
  }

  std::optional<mpz_class> const& discriminant_abs() const {
    return discriminant_abs_;
  }
  Form WithDiscriminant(mpz_class discriminant_abs) const;

  // Coefficients aᵢ when f = Σ aᵢ xᵢ^d, otherwise nullopt.
  std::optional<std::vector<Integer>> diagonal_coefficients() const;
  bool is_diagonal() const { return diagonal_coefficients().has_value(); }

  // f(x) for real x, used by the singular-integral sampler.
  double EvaluateReal(std::span<double const> x) const;

  // The monomial list in the text format accepted by `Parse`.
  std::string ToText() const;

  // Throws `DimensionMismatch` unless x has n_vars entries.
  void CheckLength(std::span<Integer const> x) const;

 private:
  friend Integer EvalForm(Form const& f, std::span<Integer const> x);
  friend IntVector Gradient(Form const& f, std::span<Integer const> x);
  friend Integer Multilinear(Form const& f, int j,
                             std::span<IntVector const> args);

  struct MultilinearTerm {
    Integer weight;          // d!·c_J, always an integer
    std::vector<int> rest;   // J with one copy of j removed, sorted
  };

  int n_vars_;
  int degree_;
  std::vector<Monomial> monomials_;
  std::map<std::vector<int>, Rational> symmetric_;
  std::vector<std::vector<MultilinearTerm>> multilinear_terms_;  // per j
  std::optional<mpz_class> discriminant_abs_;
};

Integer EvalForm(Form const& f, std::span<Integer const> x);

// ∇f(x), exact.  Satisfies x·∇f(x) = d·f(x).
IntVector Gradient(Form const& f, std::span<Integer const> x);

// m_j(u₁,…,u_{d−1}) = d!·Σ c_{j₁…j_{d−1} j} u₁[j₁]⋯u_{d−1}[j_{d−1}].
// Integral, symmetric and multilinear in its arguments; j is 0-based.
Integer Multilinear(Form const& f, int j, std::span<IntVector const> args);

// gcd of the entries of ∇f(x).  Throws `SingularPoint` if ∇f(x) = 0 at a
// non-zero x and `DomainError` for x = 0.
Integer GcdGradient(Form const& f, std::span<Integer const> x);

// |Disc| of Σ aᵢ xᵢ^d from the closed form
//   d^{−((d−1)^n − (−1)^n)/d} · Π (d·aᵢ)^{(d−1)^{n−1}}.
mpz_class DiagonalDiscriminant(std::vector<Integer> const& coefficients,
                               int degree);

// g(y) = f(U y) for an integer n×n matrix U (rows of `u`).
Form ComposeLinear(Form const& f, std::vector<IntVector> const& u);

}  // namespace freepoints

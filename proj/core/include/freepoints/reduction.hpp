#pragma once

// Lattice reduction and enumeration over an exact integral Gram matrix.
//
// Basis operations are exact (128-bit, overflow-checked).  Reduction and
// pruning decisions use long double Gram–Schmidt data; every quantity that is
// reported (norms, minima) is recomputed exactly from the integral Gram matrix.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "freepoints/arith.hpp"

namespace freepoints {

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

class Budget {
 public:
  explicit Budget(std::uint64_t limit = kDefaultNodeBudget) : limit_(limit) {}

  void Charge(std::uint64_t nodes = 1) {
    used_ += nodes;
    if (used_ > limit_) {
      throw BudgetExceeded("node budget of " + std::to_string(limit_) +
                           " exceeded; reduce the instance size or raise the budget");
    }
  }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

struct GramSchmidt {
  int rank = 0;
  std::vector<std::vector<long double>> mu;  // mu[j][i] for i < j
  std::vector<long double> norms_sq;         // ‖b*_i‖²
};

// An integral Gram matrix together with the unimodular change of basis that
// produced it.  Working vector j equals Σ_i change(j)[i] · (input vector i).
// Coefficient vectors registered with `Track` are rewritten on every basis
// operation so that they keep denoting the same lattice vectors.
class WorkingBasis {
 public:
  // `gram` is row-major rank × rank, symmetric positive definite.
  WorkingBasis(std::vector<Wide> gram, int rank);

  int rank() const { return rank_; }
  Wide gram(int i, int j) const { return gram_[i * rank_ + j]; }
  IntVector const& change(int j) const { return change_[j]; }

  // b_k ← b_k + q·b_l.
  void AddMultiple(int k, int l, Integer q);
  void Swap(int i, int j);

  Wide NormSq(std::span<Integer const> coefficients) const;

  int Track(IntVector coefficients);
  IntVector const& tracked(int t) const { return tracked_[t]; }
  int tracked_count() const { return static_cast<int>(tracked_.size()); }

  GramSchmidt ComputeGramSchmidt() const;

  // LLL with swaps confined to [lo, hi); vectors in [lo, hi) are size-reduced
  // against every earlier vector, so span(b_0, …, b_{lo−1}) is preserved.
  void Lll(int lo, int hi, double delta = 0.99);

  // Unimodular change after which the first k working vectors span the same
  // real subspace as tracked vectors 0…k−1 (which must be independent).
  void AdaptToTracked(int k);

  // Coefficients with respect to the input basis.
  IntVector ToInput(std::span<Integer const> coefficients) const;

 private:
  Wide& at(int i, int j) { return gram_[i * rank_ + j]; }

  int rank_;
  std::vector<Wide> gram_;
  std::vector<IntVector> change_;
  std::vector<IntVector> tracked_;
};

// Shortest vector whose coefficients at indices ≥ k are not all zero, i.e.
// the shortest lattice vector outside span(b_0, …, b_{k−1}).  Returns the
// coefficient vector and its exact squared norm in Gram units.
std::pair<IntVector, Wide> ShortestOutsideSpan(WorkingBasis const& basis, int k,
                                               Budget& budget);

namespace internal {

template <typename Leaf>
class TreeEnumerator {
 public:
  TreeEnumerator(GramSchmidt const& gso, long double& radius_sq, int top,
                 bool half, Leaf& leaf, Budget& budget)
      : gso_(gso),
        radius_sq_(radius_sq),
        top_(top),
        constrained_(top < gso.rank),
        half_(half),
        leaf_(leaf),
        budget_(budget),
        coefficients_(gso.rank, 0) {}

  void Run() {
    if (gso_.rank == 0) return;
    Recurse(gso_.rank - 1, 0.0L, false);
  }

 private:
  long double Limit() const { return radius_sq_ * (1.0L + 1e-10L) + 1e-300L; }

  void Recurse(int level, long double above, bool top_nonzero) {
    budget_.Charge();
    long double center = 0;
    for (int j = level + 1; j < gso_.rank; ++j) {
      center -= static_cast<long double>(coefficients_[j]) * gso_.mu[j][level];
    }
    long double const b = gso_.norms_sq[level];
    bool const nonnegative_only = half_ && constrained_ && !top_nonzero && level >= top_;

    auto visit = [&](Integer x) {
      long double const diff = static_cast<long double>(x) - center;
      long double const total = above + diff * diff * b;
      if (total > Limit()) return false;
      coefficients_[level] = x;
      bool const nonzero = top_nonzero || (level >= top_ && x != 0);
      if (level == 0) {
        if (!constrained_ || nonzero) {
          leaf_(std::span<Integer const>(coefficients_), total);
        }
      } else if (!(constrained_ && level == top_ && !nonzero)) {
        Recurse(level - 1, total, nonzero);
      }
      return true;
    };

    long double const rounded = std::nearbyint(center);
    if (std::fabs(rounded) > 9e18L) throw Overflow("enumeration centre out of range");
    Integer const x0 = static_cast<Integer>(rounded);
    Integer up = x0;
    Integer down = x0 - 1;
    if (nonnegative_only) {
      up = std::max<Integer>(x0, 0);
    }
    for (Integer x = up;; ++x) {
      if (!visit(x)) break;
    }
    for (Integer x = down; !nonnegative_only || x >= 0; --x) {
      if (!visit(x)) break;
    }
    coefficients_[level] = 0;
  }

  GramSchmidt const& gso_;
  long double& radius_sq_;
  int top_;
  bool constrained_;
  bool half_;
  Leaf& leaf_;
  Budget& budget_;
  IntVector coefficients_;
};

}  // namespace internal

// Calls leaf(coefficients, approx_norm_sq) for every coefficient vector whose
// squared norm (Gram units) is at most radius_sq, including the zero vector
// and both members of every ± pair.  Vectors within a relative 1e-10 of the
// radius are also visited; callers that need an exact boundary must recheck
// with `WorkingBasis::NormSq`.
template <typename Leaf>
void ForEachInBall(GramSchmidt const& gso, long double radius_sq, Leaf&& leaf,
                   Budget& budget) {
  long double radius = radius_sq;
  internal::TreeEnumerator<std::remove_reference_t<Leaf>> enumerator(
      gso, radius, gso.rank, /*half=*/false, leaf, budget);
  enumerator.Run();
}

}  // namespace freepoints

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "freepoints/arith.hpp"
#include "freepoints/forms.hpp"
#include "freepoints/lattices.hpp"

namespace freepoints::testing {

using Rng = std::mt19937_64;

inline Integer Uniform(Rng& rng, Integer lo, Integer hi) {
  return std::uniform_int_distribution<Integer>(lo, hi)(rng);
}

inline IntVector RandomVector(Rng& rng, int n, Integer bound) {
  IntVector v(static_cast<std::size_t>(n));
  for (auto& x : v) x = Uniform(rng, -bound, bound);
  return v;
}

inline IntVector RandomPrimitive(Rng& rng, int n, Integer bound) {
  for (;;) {
    IntVector v = RandomVector(rng, n, bound);
    if (IsPrimitive(v)) return v;
  }
}

inline Form Fermat4() { return Form::Diagonal({1, 1, 1, 1}, 3); }
inline Form Diagonal6() { return Form::Diagonal({1, 1, 1, 1, 1, 1}, 3); }

// Calls visit(x) for every x in [−b, b]^n.
inline void ForEachInBox(int n, Integer b, std::function<void(IntVector const&)> const& visit) {
  IntVector x(static_cast<std::size_t>(n), -b);
  for (;;) {
    visit(x);
    int i = 0;
    while (i < n && x[static_cast<std::size_t>(i)] == b) x[static_cast<std::size_t>(i++)] = -b;
    if (i == n) return;
    ++x[static_cast<std::size_t>(i)];
  }
}

// Rank of integer vectors by exact Gaussian elimination over Q.
inline int RankOf(std::vector<IntVector> const& rows) {
  if (rows.empty()) return 0;
  RationalMatrix m;
  for (auto const& r : rows) m.push_back(ToRationalVector(r));
  int rank = 0;
  std::size_t const cols = m.front().size();
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    std::size_t pivot = static_cast<std::size_t>(rank);
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[static_cast<std::size_t>(rank)]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == static_cast<std::size_t>(rank) || m[i][c] == 0) continue;
      Rational const factor = m[i][c] / m[static_cast<std::size_t>(rank)][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= factor * m[static_cast<std::size_t>(rank)][j];
    }
    ++rank;
  }
  return rank;
}

// Full-rank r×r integer basis with nonzero determinant.
inline std::vector<IntVector> RandomBasis(Rng& rng, int r, Integer bound) {
  for (;;) {
    std::vector<IntVector> basis;
    for (int i = 0; i < r; ++i) basis.push_back(RandomVector(rng, r, bound));
    if (RankOf(basis) == r) return basis;
  }
}

// Successive minima² of a sublattice of Zⁿ given by integer `basis`, found by
// scanning ambient integer points with ‖y‖ ≤ the longest basis vector.
inline std::vector<Integer> BruteForceMinimaSq(std::vector<IntVector> const& basis) {
  int const n = static_cast<int>(basis.front().size());
  Integer longest = 0;
  for (auto const& b : basis) longest = std::max(longest, NormSq(b));
  auto const box = static_cast<Integer>(std::floor(std::sqrt(static_cast<double>(longest))));
  Lattice const lattice = Lattice::FromIntegers(basis);
  std::vector<IntVector> members;
  ForEachInBox(n, box, [&](IntVector const& y) {
    Integer const s = NormSq(y);
    if (s == 0 || s > longest) return;
    if (lattice.Contains(ToRationalVector(y))) members.push_back(y);
  });
  std::stable_sort(members.begin(), members.end(),
                   [](IntVector const& a, IntVector const& b) { return NormSq(a) < NormSq(b); });
  std::vector<Integer> minima;
  std::vector<IntVector> chosen;
  for (auto const& y : members) {
    chosen.push_back(y);
    if (RankOf(chosen) > static_cast<int>(minima.size())) {
      minima.push_back(NormSq(y));
    } else {
      chosen.pop_back();
    }
    if (minima.size() == basis.size()) break;
  }
  return minima;
}

}  // namespace freepoints::testing

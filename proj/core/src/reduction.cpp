#include "freepoints/reduction.hpp"

#include <algorithm>
#include <cmath>

namespace freepoints {

namespace {

constexpr int kMaxLllIterations = 1'000'000;
constexpr int kMaxSizeReductionPasses = 16;

}  // namespace

WorkingBasis::WorkingBasis(std::vector<Wide> gram, int rank)
    : rank_(rank), gram_(std::move(gram)) {
  if (static_cast<int>(gram_.size()) != rank * rank) {
    throw DimensionMismatch("Gram matrix size does not match rank");
  }
  change_.assign(rank, IntVector(rank, 0));
  for (int i = 0; i < rank; ++i) change_[i][i] = 1;
}

void WorkingBasis::AddMultiple(int k, int l, Integer q) {
  if (q == 0) return;
  Wide const old_kk = at(k, k);
  Wide const old_kl = at(k, l);
  Wide const ll = at(l, l);
  for (int j = 0; j < rank_; ++j) {
    if (j == k) continue;
    at(k, j) = WideAdd(at(k, j), WideMul(q, at(l, j)));
    at(j, k) = at(k, j);
  }
  at(k, k) = WideAdd(WideAdd(old_kk, WideMul(WideMul(2, q), old_kl)),
                     WideMul(WideMul(q, q), ll));
  for (int i = 0; i < rank_; ++i) {
    change_[k][i] = CheckedAdd(change_[k][i], CheckedMul(q, change_[l][i]));
  }
  for (auto& t : tracked_) {
    t[l] = CheckedAdd(t[l], -CheckedMul(q, t[k]));
  }
}

void WorkingBasis::Swap(int i, int j) {
  if (i == j) return;
  for (int c = 0; c < rank_; ++c) std::swap(at(i, c), at(j, c));
  for (int r = 0; r < rank_; ++r) std::swap(at(r, i), at(r, j));
  std::swap(change_[i], change_[j]);
  for (auto& t : tracked_) std::swap(t[i], t[j]);
}

Wide WorkingBasis::NormSq(std::span<Integer const> coefficients) const {
  Wide total = 0;
  for (int i = 0; i < rank_; ++i) {
    if (coefficients[i] == 0) continue;
    Wide row = 0;
    for (int j = 0; j < rank_; ++j) {
      if (coefficients[j] == 0) continue;
      row = WideAdd(row, WideMul(gram(i, j), coefficients[j]));
    }
    total = WideAdd(total, WideMul(row, coefficients[i]));
  }
  return total;
}

int WorkingBasis::Track(IntVector coefficients) {
  if (static_cast<int>(coefficients.size()) != rank_) {
    throw DimensionMismatch("tracked vector has wrong length");
  }
  tracked_.push_back(std::move(coefficients));
  return static_cast<int>(tracked_.size()) - 1;
}

GramSchmidt WorkingBasis::ComputeGramSchmidt() const {
  GramSchmidt gso;
  gso.rank = rank_;
  gso.mu.assign(rank_, std::vector<long double>(rank_, 0.0L));
  gso.norms_sq.assign(rank_, 0.0L);
  for (int j = 0; j < rank_; ++j) {
    for (int i = 0; i < j; ++i) {
      long double s = static_cast<long double>(gram(j, i));
      for (int l = 0; l < i; ++l) s -= gso.mu[i][l] * gso.mu[j][l] * gso.norms_sq[l];
      gso.mu[j][i] = s / gso.norms_sq[i];
    }
    long double s = static_cast<long double>(gram(j, j));
    for (int l = 0; l < j; ++l) s -= gso.mu[j][l] * gso.mu[j][l] * gso.norms_sq[l];
    gso.norms_sq[j] = s;
    if (!(s > 0)) {
      throw DomainError("Gram matrix is not positive definite (dependent basis?)");
    }
  }
  return gso;
}

void WorkingBasis::Lll(int lo, int hi, double delta) {
  if (hi - lo < 1) return;
  int k = lo;
  for (int iteration = 0; k < hi && iteration < kMaxLllIterations; ++iteration) {
    GramSchmidt gso = ComputeGramSchmidt();
    for (int pass = 0; pass < kMaxSizeReductionPasses; ++pass) {
      bool changed = false;
      for (int j = k - 1; j >= 0; --j) {
        long double const m = gso.mu[k][j];
        if (std::fabs(m) <= 0.5L) continue;
        long double const rounded = std::nearbyint(m);
        if (std::fabs(rounded) > 9e18L) throw Overflow("size reduction coefficient");
        auto const q = static_cast<Integer>(rounded);
        AddMultiple(k, j, -q);
        for (int i = 0; i < j; ++i) gso.mu[k][i] -= rounded * gso.mu[j][i];
        gso.mu[k][j] -= rounded;
        changed = true;
      }
      if (!changed) break;
      gso = ComputeGramSchmidt();
    }
    long double const m = k > 0 ? gso.mu[k][k - 1] : 0.0L;
    if (k > lo &&
        gso.norms_sq[k] < (static_cast<long double>(delta) - m * m) * gso.norms_sq[k - 1]) {
      Swap(k, k - 1);
      --k;
    } else {
      ++k;
    }
  }
}

void WorkingBasis::AdaptToTracked(int k) {
  if (k > tracked_count()) throw DomainError("fewer tracked vectors than requested");
  for (int col = 0; col < k; ++col) {
    for (;;) {
      int pivot = -1;
      for (int row = col; row < rank_; ++row) {
        Integer const v = tracked_[col][row];
        if (v == 0) continue;
        if (pivot == -1 || std::llabs(v) < std::llabs(tracked_[col][pivot])) pivot = row;
      }
      if (pivot == -1) throw DomainError("tracked vectors are linearly dependent");
      Swap(pivot, col);
      bool done = true;
      for (int row = col + 1; row < rank_; ++row) {
        Integer const v = tracked_[col][row];
        if (v == 0) continue;
        Integer const q = v / tracked_[col][col];
        if (q != 0) AddMultiple(col, row, q);
        if (tracked_[col][row] != 0) done = false;
      }
      if (done) break;
    }
  }
}

IntVector WorkingBasis::ToInput(std::span<Integer const> coefficients) const {
  IntVector out(rank_, 0);
  for (int j = 0; j < rank_; ++j) {
    if (coefficients[j] == 0) continue;
    for (int i = 0; i < rank_; ++i) {
      out[i] = CheckedAdd(out[i], CheckedMul(coefficients[j], change_[j][i]));
    }
  }
  return out;
}

std::pair<IntVector, Wide> ShortestOutsideSpan(WorkingBasis const& basis, int k,
                                               Budget& budget) {
  int const r = basis.rank();
  if (k < 0 || k >= r) throw DomainError("span index out of range");
  GramSchmidt const gso = basis.ComputeGramSchmidt();

  IntVector best(r, 0);
  int start = k;
  for (int j = k + 1; j < r; ++j) {
    if (basis.gram(j, j) < basis.gram(start, start)) start = j;
  }
  best[start] = 1;
  Wide best_norm = basis.gram(start, start);
  long double radius = static_cast<long double>(best_norm);

  auto leaf = [&](std::span<Integer const> c, long double) {
    Wide const exact = basis.NormSq(c);
    if (exact < best_norm) {
      best_norm = exact;
      best.assign(c.begin(), c.end());
      radius = static_cast<long double>(best_norm);
    }
  };
  internal::TreeEnumerator<decltype(leaf)> enumerator(gso, radius, k, /*half=*/true,
                                                      leaf, budget);
  enumerator.Run();
  return {best, best_norm};
}

}  // namespace freepoints

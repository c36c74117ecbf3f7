#include "freepoints/theta.hpp"

#include <algorithm>
#include <cmath>

namespace freepoints {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr int kGridSteps = 8;  // shell width R/8

struct Prepared {
  explicit Prepared(Lattice const& lattice)
      : reduced(lattice), gso(reduced.working().ComputeGramSchmidt()) {
    for (long double b : gso.norms_sq) lengths.push_back(std::sqrt(b * reduced.unit_ld()));
  }

  ReducedGram reduced;
  GramSchmidt gso;
  std::vector<long double> lengths;  // ‖b*_i‖ in the lattice metric
};

long double CountBound(std::vector<long double> const& lengths, long double rho) {
  long double n = 1;
  for (long double g : lengths) n *= 2 * rho / g + 1;
  return n;
}

// Σ_{m≥0} N(t + (m+1)h)·exp(−π(t + mh)²/R²) ≥ mass beyond t.
long double TailFrom(std::vector<long double> const& lengths, long double radius,
                     long double t) {
  long double const h = radius / kGridSteps;
  long double const peak = radius * std::sqrt(static_cast<long double>(lengths.size()) / kPi) + radius;
  long double sum = 0;
  for (int m = 0; m < 1'000'000; ++m) {
    long double const inner = t + m * h;
    long double const weight = std::exp(-kPi * inner * inner / (radius * radius));
    long double const term = CountBound(lengths, inner + h) * weight;
    sum += term;
    if (inner > peak && term <= 1e-22L * sum) break;
    if (inner > peak && sum == 0) break;
  }
  return sum;
}

long double TailBoundAt(std::vector<long double> const& lengths, long double radius,
                        long double t) {
  long double const h = radius / kGridSteps;
  long double best = TailFrom(lengths, radius, 0);
  for (int j = 1; j * h <= t * (1 + 1e-15L); ++j) best = std::min(best, TailFrom(lengths, radius, j * h));
  return best;
}

long double TruncationFor(std::vector<long double> const& lengths, long double radius,
                          long double tol) {
  long double const h = radius / kGridSteps;
  for (int j = 1;; ++j) {
    if (TailFrom(lengths, radius, j * h) <= tol) return j * h;
    if (j > 100'000) throw DomainError("theta truncation radius did not converge");
  }
}

long double KahanSumAscending(std::vector<long double>& terms) {
  std::sort(terms.begin(), terms.end());
  long double sum = 0;
  long double carry = 0;
  for (long double t : terms) {
    long double const y = t - carry;
    long double const next = sum + y;
    carry = (next - sum) - y;
    sum = next;
  }
  return sum;
}

void CheckRadius(double radius, double tol) {
  if (!(radius > 0) || !std::isfinite(radius)) throw DomainError("theta radius must be positive");
  if (!(tol > 0)) throw DomainError("theta tolerance must be positive");
}

}  // namespace

ThetaValue ThetaSum(Lattice const& lattice, double radius, double tol, Budget& budget) {
  CheckRadius(radius, tol);
  Prepared prepared(lattice);
  long double const R = radius;
  long double const t = TruncationFor(prepared.lengths, R, tol);
  long double const unit = prepared.reduced.unit_ld();
  std::vector<long double> terms;
  ForEachInBall(
      prepared.gso, t * t / unit,
      [&](std::span<Integer const>, long double gram_norm) {
        terms.push_back(std::exp(-kPi * gram_norm * unit / (R * R)));
      },
      budget);
  ThetaValue out;
  out.value = static_cast<double>(KahanSumAscending(terms));
  out.truncation_radius = static_cast<double>(t);
  out.tail_bound = static_cast<double>(TailBoundAt(prepared.lengths, R, t));
  return out;
}

ThetaValue ThetaSum(Lattice const& lattice, double radius, double tol) {
  Budget budget;
  return ThetaSum(lattice, radius, tol, budget);
}

double ThetaTailBound(Lattice const& lattice, double radius, double t) {
  CheckRadius(radius, 1);
  Prepared prepared(lattice);
  return static_cast<double>(TailBoundAt(prepared.lengths, radius, std::max(0.0, t)));
}

double PoissonResidual(Lattice const& lattice, double radius, double tol, Budget& budget) {
  CheckRadius(radius, tol);
  int const r = lattice.rank();
  double const det = std::sqrt(ToDouble(DeterminantSq(lattice)));
  double const factor = std::pow(radius, r) / det;
  double const dual_tol = std::min(tol, tol / factor);
  ThetaValue const direct = ThetaSum(lattice, radius, tol, budget);
  ThetaValue const dual = ThetaSum(Dual(lattice), 1.0 / radius, dual_tol, budget);
  return std::fabs(direct.value - factor * dual.value);
}

double PoissonResidual(Lattice const& lattice, double radius, double tol) {
  Budget budget;
  return PoissonResidual(lattice, radius, tol, budget);
}

double SkewMajorant(Lattice const& lattice, double radius, double tol, Budget& budget) {
  CheckRadius(radius, tol);
  int const r = lattice.rank();
  Prepared prepared(Dual(lattice));
  long double const R = radius;
  long double const rho = 1 / R;
  long double const t =
      std::max(TruncationFor(prepared.lengths, rho, tol), (r + 0.5L) / R);
  long double const unit = prepared.reduced.unit_ld();
  long double const r_sq = static_cast<long double>(r) * r;
  std::vector<long double> terms;
  ForEachInBall(
      prepared.gso, t * t / unit,
      [&](std::span<Integer const> c, long double gram_norm) {
        if (std::all_of(c.begin(), c.end(), [](Integer v) { return v == 0; })) return;
        terms.push_back(std::exp(kPi * (r_sq - R * R * gram_norm * unit)));
      },
      budget);
  return static_cast<double>(KahanSumAscending(terms));
}

double SkewMajorant(Lattice const& lattice, double radius, double tol) {
  Budget budget;
  return SkewMajorant(lattice, radius, tol, budget);
}

bool SkewIndicator(Lattice const& lattice, double radius, Budget& budget) {
  CheckRadius(radius, 1);
  MinimaProfile const minima = SuccessiveMinima(lattice, budget);
  Rational const r = ToRational(radius);
  return minima.minima_sq.back() > r * r;
}

bool SkewIndicator(Lattice const& lattice, double radius) {
  Budget budget;
  return SkewIndicator(lattice, radius, budget);
}

}  // namespace freepoints

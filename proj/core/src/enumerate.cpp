#include "freepoints/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "freepoints/freeness.hpp"
#include "real_roots.hpp"

namespace freepoints {

void EnumerationPlan::Validate(int n_vars) const {
  if (!(box_bound >= 0) || !std::isfinite(box_bound)) {
    throw DomainError("height bound must be finite and non-negative");
  }
  if (shell) {
    if (!(shell->radius > 0) || !std::isfinite(shell->radius)) {
      throw DomainError("shell radius must be positive");
    }
  } else if (box_bound <= 0) {
    throw DomainError("height bound must be positive");
  }
  if (split && (*split < 1 || *split >= n_vars)) {
    throw DomainError("meet-in-the-middle split must leave variables on both sides");
  }
  if (budget == 0) throw DomainError("budget must be positive");
}

Integer MaxNormSq(double bound) {
  if (!(bound >= 0)) throw DomainError("negative height bound");
  Rational const b = ToRational(bound);
  mpz_class floor_sq;
  Rational const sq = b * b;
  mpz_fdiv_q(floor_sq.get_mpz_t(), sq.get_num_mpz_t(), sq.get_den_mpz_t());
  if (!floor_sq.fits_slong_p()) throw Overflow("height bound too large");
  return floor_sq.get_si();
}

Integer ShellLowerNormSq(double radius) {
  Rational const r = ToRational(radius);
  Rational const sq = r * r / 4;
  mpz_class floor_sq;
  mpz_fdiv_q(floor_sq.get_mpz_t(), sq.get_num_mpz_t(), sq.get_den_mpz_t());
  if (!floor_sq.fits_slong_p()) throw Overflow("shell radius too large");
  return floor_sq.get_si();
}

namespace {

using namespace internal;

Integer ISqrt(Integer v) {
  if (v < 0) return -1;
  auto r = static_cast<Integer>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

Wide EvaluateExact(std::vector<Wide> const& coefficients, Integer t) {
  Wide v = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    v = WideAdd(WideMul(v, t), *it);
  }
  return v;
}

}  // namespace

std::vector<Integer> IntegerRoots(std::vector<Wide> const& coefficients, Integer lo,
                                  Integer hi) {
  std::vector<Integer> roots;
  if (lo > hi) return roots;
  std::vector<Wide> c = coefficients;
  while (!c.empty() && c.back() == 0) c.pop_back();
  if (c.empty()) {
    for (Integer t = lo; t <= hi; ++t) roots.push_back(t);
    return roots;
  }
  if (c.size() == 1) return roots;

  Poly p;
  for (Wide w : c) p.push_back(static_cast<long double>(w));
  std::vector<Integer> candidates{lo, hi};
  auto near = [&](long double r) {
    auto const base = static_cast<Integer>(std::floor(r));
    for (Integer t = base - 1; t <= base + 2; ++t) candidates.push_back(t);
  };
  long double const a = static_cast<long double>(lo);
  long double const b = static_cast<long double>(hi);
  for (long double r : RealRoots(p, a, b)) near(r);
  for (long double r : RealRoots(Derivative(p), a, b)) near(r);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (Integer t : candidates) {
    if (t < lo || t > hi) continue;
    if (EvaluateExact(c, t) == 0) roots.push_back(t);
  }
  return roots;
}

namespace {

struct Region {
  Integer lower;  // ‖x‖² > lower
  Integer upper;  // ‖x‖² ≤ upper
};

Region RegionOf(EnumerationPlan const& plan) {
  Region region{0, plan.shell ? MaxNormSq(plan.shell->radius) : MaxNormSq(plan.box_bound)};
  if (plan.shell) {
    region.lower = std::max<Integer>(0, ShellLowerNormSq(plan.shell->radius));
    if (plan.box_bound > 0) region.upper = std::min(region.upper, MaxNormSq(plan.box_bound));
  }
  return region;
}

class NaiveSearch {
 public:
  NaiveSearch(Form const& f, Region region, bool primitive_only, Budget& budget,
              std::vector<IntVector>& out)
      : f_(f),
        n_(f.n_vars()),
        region_(region),
        primitive_only_(primitive_only),
        budget_(budget),
        out_(out),
        x_(f.n_vars(), 0) {}

  void Run() { Recurse(0, 0, true); }

 private:
  void Recurse(int i, Integer partial, bool all_zero) {
    budget_.Charge();
    Integer const m = ISqrt(region_.upper - partial);
    if (i == n_ - 1) {
      Solve(partial, all_zero, m);
      return;
    }
    for (Integer v = all_zero ? 0 : -m; v <= m; ++v) {
      x_[i] = v;
      Recurse(i + 1, partial + v * v, all_zero && v == 0);
    }
    x_[i] = 0;
  }

  void Solve(Integer partial, bool all_zero, Integer m) {
    std::vector<Wide> coefficients(f_.degree() + 1, 0);
    for (auto const& mono : f_.monomials()) {
      Wide term = mono.coefficient;
      for (int j = 0; j + 1 < n_; ++j) {
        for (int e = 0; e < mono.exponents[j]; ++e) term = WideMul(term, x_[j]);
      }
      int const k = mono.exponents[n_ - 1];
      coefficients[k] = WideAdd(coefficients[k], term);
    }
    for (Integer t : IntegerRoots(coefficients, all_zero ? 1 : -m, m)) {
      Integer const norm = partial + t * t;
      if (norm <= region_.lower) continue;
      x_[n_ - 1] = t;
      if (primitive_only_ && !IsPrimitive(x_)) continue;
      out_.push_back(x_);
    }
    x_[n_ - 1] = 0;
  }

  Form const& f_;
  int n_;
  Region region_;
  bool primitive_only_;
  Budget& budget_;
  std::vector<IntVector>& out_;
  IntVector x_;
};

struct WideHash {
  std::size_t operator()(Wide w) const {
    auto const u = static_cast<unsigned __int128>(w);
    std::uint64_t h = static_cast<std::uint64_t>(u) ^
                      (static_cast<std::uint64_t>(u >> 64) * 0x9E3779B97F4A7C15ULL);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

// All vectors of the given length with squared norm ≤ upper, with Σ aᵢ vᵢ^d.
template <typename Visit>
void BallVectors(std::vector<Integer> const& coefficients, int degree, Integer upper,
                 Budget& budget, Visit&& visit) {
  int const len = static_cast<int>(coefficients.size());
  IntVector v(len, 0);
  std::vector<Wide> powers;
  auto recurse = [&](auto&& self, int i, Integer norm, Wide value) -> void {
    budget.Charge();
    if (i == len) {
      visit(v, norm, value);
      return;
    }
    Integer const m = ISqrt(upper - norm);
    for (Integer t = -m; t <= m; ++t) {
      Wide p = coefficients[i];
      for (int e = 0; e < degree; ++e) p = WideMul(p, t);
      v[i] = t;
      self(self, i + 1, norm + t * t, WideAdd(value, p));
    }
    v[i] = 0;
  };
  recurse(recurse, 0, 0, 0);
}

void MeetInTheMiddle(std::vector<Integer> const& a, int degree, int split, Region region,
                     bool primitive_only, Budget& budget, std::vector<IntVector>& out) {
  int const n = static_cast<int>(a.size());
  std::vector<Integer> left_coefficients(a.begin(), a.begin() + split);
  std::vector<Integer> right_coefficients(a.begin() + split, a.end());

  std::vector<IntVector> left_vectors;
  std::unordered_map<Wide, std::vector<std::pair<Integer, std::size_t>>, WideHash> buckets;
  BallVectors(left_coefficients, degree, region.upper, budget,
              [&](IntVector const& u, Integer norm, Wide value) {
                buckets[value].emplace_back(norm, left_vectors.size());
                left_vectors.push_back(u);
              });
  for (auto& [value, entries] : buckets) std::sort(entries.begin(), entries.end());

  IntVector x(n, 0);
  BallVectors(right_coefficients, degree, region.upper, budget,
              [&](IntVector const& v, Integer norm, Wide value) {
                auto const it = buckets.find(-value);
                if (it == buckets.end()) return;
                for (auto const& [left_norm, index] : it->second) {
                  Integer const total = left_norm + norm;
                  if (total > region.upper) break;
                  if (total <= region.lower) continue;
                  auto const& u = left_vectors[index];
                  std::copy(u.begin(), u.end(), x.begin());
                  std::copy(v.begin(), v.end(), x.begin() + split);
                  if (!IsNormalized(x)) continue;
                  if (primitive_only && !IsPrimitive(x)) continue;
                  out.push_back(x);
                }
              });
}

}  // namespace

EnumerationResult EnumeratePoints(Form const& f, EnumerationPlan const& plan) {
  plan.Validate(f.n_vars());
  Region const region = RegionOf(plan);
  EnumerationResult result;
  Budget budget(plan.budget);
  auto const diagonal = f.diagonal_coefficients();
  bool const use_mitm = plan.method == EnumerationPlan::Method::kMeetInTheMiddle ||
                        (plan.method == EnumerationPlan::Method::kAuto && diagonal &&
                         f.n_vars() >= 2);
  if (use_mitm && !diagonal) {
    throw DomainError("meet-in-the-middle enumeration needs a diagonal form");
  }
  try {
    if (region.upper > region.lower) {
      if (use_mitm) {
        MeetInTheMiddle(*diagonal, f.degree(), plan.split.value_or(f.n_vars() / 2), region,
                        plan.primitive_only, budget, result.points);
      } else {
        NaiveSearch(f, region, plan.primitive_only, budget, result.points).Run();
      }
    }
  } catch (BudgetExceeded const&) {
    result.complete = false;
  }
  std::sort(result.points.begin(), result.points.end());
  result.budget_used = budget.used();
  return result;
}

std::int64_t CountNV(Form const& f, double bound, std::uint64_t budget) {
  EnumerationPlan plan;
  plan.box_bound = bound;
  plan.budget = budget;
  EnumerationResult const result = EnumeratePoints(f, plan);
  if (!result.complete) {
    throw BudgetExceeded("point enumeration ran out of budget at B = " + FormatDouble(bound));
  }
  return static_cast<std::int64_t>(result.points.size());
}

Rational PointDeterminantSq(Form const& f, std::span<Integer const> x) {
  IntVector const grad = Gradient(f, x);
  Integer g = GcdGradient(f, x);
  if (f.discriminant_abs()) {
    mpz_class common;
    mpz_class const gz(static_cast<long>(g));
    mpz_gcd(common.get_mpz_t(), gz.get_mpz_t(), f.discriminant_abs()->get_mpz_t());
    g = common.get_si();
  }
  Wide norm = 0;
  for (Integer v : grad) norm = WideAdd(norm, WideMul(v, v));
  return ToRational(norm) / Rational(static_cast<long>(g) * static_cast<long>(g));
}

double PointDeterminant(Form const& f, std::span<Integer const> x) {
  return std::sqrt(ToDouble(PointDeterminantSq(f, x)));
}

namespace {

EnumerationResult EnumerateOrThrow(Form const& f, EnumerationPlan const& plan) {
  EnumerationResult result = EnumeratePoints(f, plan);
  if (!result.complete) throw BudgetExceeded("point enumeration ran out of budget");
  return result;
}

IntVector PrimitivePart(IntVector x) {
  Integer const g = Gcd(x);
  if (g > 1) {
    for (auto& v : x) v /= g;
  }
  return x;
}

}  // namespace

EStarResult CountEStar(Form const& f, double radius, double epsilon, double tol,
                       std::uint64_t budget) {
  if (!(radius >= 2)) throw DomainError("E* needs R ≥ 2");
  EnumerationPlan plan;
  plan.shell = Shell{radius};
  plan.budget = budget;
  EnumerationResult const points = EnumerateOrThrow(f, plan);

  Budget node_budget(budget);
  Rational const r = ToRational(radius);
  Rational const r_sq = r * r;
  double const y = std::pow(radius, 1 - epsilon);
  EStarResult out;
  out.majorant = 1;
  for (auto const& x : points.points) {
    ++out.shell_points;
    Lattice const lattice = PointLattice(f, x);
    MinimaProfile const minima = SuccessiveMinima(lattice, node_budget);
    if (!PowerAtMost(minima.minima_sq.back(), r_sq, 1 - epsilon)) {
      ++out.count;
      out.skew_points.push_back(x);
    }
    out.majorant += SkewMajorant(lattice, y, tol, node_budget);
  }
  return out;
}

MoebiusCheck MoebiusIdentityCheck(Form const& f, double radius, double epsilon, double tol,
                                  std::uint64_t budget) {
  if (!(radius >= 1)) throw DomainError("Moebius check needs R ≥ 1");
  EnumerationPlan plan;
  plan.box_bound = radius;
  plan.primitive_only = false;
  plan.budget = budget;
  EnumerationResult const all = EnumerateOrThrow(f, plan);

  Budget node_budget(budget);
  double const y = std::pow(radius, 1 - epsilon);
  MoebiusCheck out;
  double weights = 0;

  Integer const upper = MaxNormSq(radius);
  Integer const lower = ShellLowerNormSq(radius);
  for (auto const& x : all.points) {
    Integer const norm = NormSq(x);
    if (norm <= lower || norm > upper || !IsPrimitive(x)) continue;
    double const w = PointDeterminant(f, x);
    out.direct += w * ThetaSum(PointLattice(f, x), y, tol, node_budget).value;
    weights += w;
    ++out.terms;
  }

  auto const k_max = static_cast<Integer>(std::floor(radius));
  for (Integer k = 1; k <= k_max; ++k) {
    int const mu = Moebius(k);
    if (mu == 0) continue;
    Rational const s = ToRational(radius) / Rational(static_cast<long>(k));
    Rational const s_sq = s * s;
    for (auto const& x : all.points) {
      Rational const norm(static_cast<long>(NormSq(x)));
      if (norm > s_sq || norm * 4 <= s_sq) continue;
      IntVector kx = x;
      for (auto& v : kx) v = CheckedMul(v, k);
      double const w = PointDeterminant(f, kx);
      double const theta = ThetaSum(PointLattice(f, PrimitivePart(x)), y, tol, node_budget).value;
      out.inverted += mu * w * theta;
      weights += w;
      ++out.terms;
    }
  }
  out.residual = std::fabs(out.direct - out.inverted);
  out.tolerance_budget = 4 * tol * weights;
  return out;
}

std::int64_t CountTangentPairs(Form const& f, double bound, double y_bound,
                               bool primitive_only, std::uint64_t budget) {
  if (!(bound >= 1) || !(y_bound >= 1)) throw DomainError("tangent count needs B, Y ≥ 1");
  EnumerationPlan plan;
  plan.box_bound = bound;
  plan.primitive_only = primitive_only;
  plan.budget = budget;
  EnumerationResult const points = EnumerateOrThrow(f, plan);
  Budget node_budget(budget);
  Rational const yq = ToRational(y_bound);
  std::int64_t total = 0;
  for (auto const& x : points.points) {
    Lattice const lattice = PointLattice(f, PrimitivePart(x));
    total += 2 * CountLatticePoints(lattice, yq * yq, node_budget);
  }
  return total;
}

}  // namespace freepoints

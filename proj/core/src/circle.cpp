#include "freepoints/circle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace freepoints {

namespace {

constexpr long double kTwoPi = 2 * std::numbers::pi_v<long double>;
constexpr long double kPi = std::numbers::pi_v<long double>;

long double Frac(long double x) { return x - std::floor(x); }

long double DistanceToInteger(long double x) {
  long double const f = Frac(x);
  return std::min(f, 1 - f);
}

Rational Abs(Rational const& q) { return q < 0 ? Rational(-q) : q; }

Rational DistanceToInteger(Rational const& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational const below = x - Rational(fl);
  Rational const above = Rational(fl + 1) - x;
  return below < above ? below : above;
}

// Σ_{m ≥ 1} e^{−πm²/Y²} cos(2πφm), truncated once the remaining tail is ≤ δ.
long double GaussianCosineSeries(long double phase, long double y, long double delta) {
  long double const c = kPi / (y * y);
  long double sum = 0;
  for (long m = 1;; ++m) {
    long double const md = static_cast<long double>(m);
    sum += std::exp(-c * md * md) * std::cos(kTwoPi * Frac(phase * md));
    // Σ_{k>m} e^{−ck²} ≤ e^{−c(m+1)²}/(1 − e^{−c(2m+3)})
    long double const next = std::exp(-c * (md + 1) * (md + 1));
    long double const ratio = std::exp(-c * (2 * md + 3));
    if (ratio < 1 && next / (1 - ratio) <= delta) break;
    if (m > 100'000'000) throw BudgetExceeded("theta series did not converge");
  }
  return sum;
}

struct Arc {
  long double center;
  long double half_width;
  Integer a;
  Integer q;
};

long double AdaptiveSimpson(std::function<long double(long double)> const& g, long double lo,
                            long double hi, long double f_lo, long double f_mid,
                            long double f_hi, long double whole, long double tol, int depth) {
  long double const mid = (lo + hi) / 2;
  long double const f_lm = g((lo + mid) / 2);
  long double const f_rm = g((mid + hi) / 2);
  long double const left = (mid - lo) / 6 * (f_lo + 4 * f_lm + f_mid);
  long double const right = (hi - mid) / 6 * (f_mid + 4 * f_rm + f_hi);
  long double const delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15 * tol) return left + right + delta / 15;
  return AdaptiveSimpson(g, lo, mid, f_lo, f_lm, f_mid, left, tol / 2, depth - 1) +
         AdaptiveSimpson(g, mid, hi, f_mid, f_rm, f_hi, right, tol / 2, depth - 1);
}

long double Integrate(std::function<long double(long double)> const& g, long double lo,
                      long double hi, long double tol) {
  // Start from eight panels so a narrow peak is not missed.
  constexpr int kPanels = 8;
  long double total = 0;
  long double const step = (hi - lo) / kPanels;
  for (int i = 0; i < kPanels; ++i) {
    long double const a = lo + step * i;
    long double const b = a + step;
    long double const fa = g(a);
    long double const fm = g((a + b) / 2);
    long double const fb = g(b);
    long double const whole = (b - a) / 6 * (fa + 4 * fm + fb);
    total += AdaptiveSimpson(g, a, b, fa, fm, fb, whole, tol / kPanels, 40);
  }
  return total;
}

Integer StrictBound(double p) {
  // largest integer t with t < p
  if (!(p > 0)) throw DomainError("ball radius must be positive");
  return static_cast<Integer>(std::ceil(p)) - 1;
}

void BallRecurse(int n, Integer t_max, Integer norm_limit, NormKind norm, IntVector& u,
                 Integer partial, std::vector<IntVector>& out, Budget& budget) {
  auto const k = static_cast<int>(u.size());
  if (k == n) {
    budget.Charge();
    out.push_back(u);
    return;
  }
  for (Integer t = -t_max; t <= t_max; ++t) {
    Integer next = partial;
    if (norm == NormKind::kEuclidean) {
      next = partial + t * t;
      if (next > norm_limit) continue;
    }
    u.push_back(t);
    BallRecurse(n, t_max, norm_limit, norm, u, next, out, budget);
    u.pop_back();
  }
}

std::vector<IntVector> TuplePoints(Form const& f, double p, NormKind norm,
                                   std::uint64_t budget_limit, std::size_t& tuple_count) {
  if (f.degree() < 2) throw DomainError("multilinear forms need degree ≥ 2");
  Budget budget(budget_limit);
  std::vector<IntVector> points = OpenBallPoints(f.n_vars(), p, norm, budget);
  long double total = 1;
  for (int i = 0; i < f.degree() - 1; ++i) total *= static_cast<long double>(points.size());
  if (total > static_cast<long double>(budget_limit - budget.used())) {
    throw BudgetExceeded("tuple count " + FormatDouble(static_cast<double>(total)) +
                         " exceeds the node budget");
  }
  tuple_count = static_cast<std::size_t>(total);
  return points;
}

template <typename Accept>
std::int64_t CountTuples(Form const& f, std::vector<IntVector> const& points,
                         std::size_t tuple_count, Accept accept) {
  int const slots = f.degree() - 1;
  int const n = f.n_vars();
  std::vector<std::size_t> index(static_cast<std::size_t>(slots), 0);
  std::vector<IntVector> args(static_cast<std::size_t>(slots));
  std::int64_t count = 0;
  for (std::size_t t = 0; t < tuple_count; ++t) {
    for (int s = 0; s < slots; ++s) args[static_cast<std::size_t>(s)] = points[index[static_cast<std::size_t>(s)]];
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) ok = accept(Multilinear(f, j, args));
    if (ok) ++count;
    for (int s = slots - 1; s >= 0; --s) {
      auto& i = index[static_cast<std::size_t>(s)];
      if (++i < points.size()) break;
      i = 0;
    }
  }
  return count;
}

}  // namespace

ArcConfig ArcConfig::FromRadius(double radius, int k, double epsilon, double eta, double c_f,
                                int degree) {
  ArcConfig config;
  config.radius = radius;
  config.k = k;
  config.epsilon = epsilon;
  config.eta = eta;
  config.c_f = c_f;
  config.degree = degree;
  config.x_scale = radius / k;
  config.y_scale = std::pow(radius, 1 - epsilon);
  config.Validate();
  return config;
}

void ArcConfig::Validate() const {
  if (!(x_scale > 0) || !(y_scale > 0)) throw DomainError("X and Y must be positive");
  if (!(eta > 0 && eta < 1)) throw DomainError("η must lie in (0, 1)");
  if (!(c_f > 0)) throw DomainError("C_f must be positive");
  if (degree < 2) throw DomainError("degree must be ≥ 2");
  if (k < 1) throw DomainError("k must be ≥ 1");
}

double ArcConfig::ArcWidth() const { return 1 / (c_f * std::pow(x_scale, degree - 1)); }

double ArcConfig::DenominatorBound() const { return std::pow(y_scale, 1 - eta); }

RationalApprox DirichletApprox(double alpha, double q_bound) {
  if (!std::isfinite(alpha)) throw DomainError("α must be finite");
  if (!(q_bound >= 1)) throw DomainError("Dirichlet bound Q must be ≥ 1");
  Rational const exact = ToRational(alpha);
  Rational remaining = exact;
  mpz_class h = 1, h_prev = 0;
  mpz_class k = 0, k_prev = 1;
  mpz_class best_p;
  mpz_class best_q;
  mpz_fdiv_q(best_p.get_mpz_t(), exact.get_num_mpz_t(), exact.get_den_mpz_t());
  best_q = 1;
  mpz_class const limit(std::floor(q_bound));
  for (;;) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), remaining.get_num_mpz_t(), remaining.get_den_mpz_t());
    mpz_class const h_next = a * h + h_prev;
    mpz_class const k_next = a * k + k_prev;
    if (k_next > limit) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    best_p = h;
    best_q = k;
    Rational const frac = remaining - Rational(a);
    if (frac == 0) break;
    remaining = 1 / frac;
  }
  mpz_class a_mod;
  mpz_fdiv_r(a_mod.get_mpz_t(), best_p.get_mpz_t(), best_q.get_mpz_t());
  RationalApprox out;
  out.a = a_mod.get_si();
  out.q = best_q.get_si();
  out.remainder = ToDouble(exact - Rational(best_p, best_q));
  return out;
}

std::optional<RationalApprox> IsMajorArc(double beta, ArcConfig const& config) {
  config.Validate();
  long double const b = Frac(beta);
  long double const width = config.ArcWidth();
  auto const q_max = static_cast<Integer>(std::floor(config.DenominatorBound()));
  for (Integer q = 1; q <= q_max; ++q) {
    long double const t = b * static_cast<long double>(q);
    auto a = static_cast<Integer>(std::llround(t));
    a = std::clamp<Integer>(a, 0, q - 1);
    if (std::fabs(t - static_cast<long double>(a)) > width) continue;
    if (Gcd(a, q) != 1) continue;
    RationalApprox out;
    out.a = a;
    out.q = q;
    out.remainder = static_cast<double>(b - static_cast<long double>(a) / q);
    return out;
  }
  return std::nullopt;
}

SBetaValue SBetaForGradient(std::span<Integer const> gradient, double beta, double y_scale,
                            double tol) {
  if (!(y_scale > 0)) throw DomainError("Y must be positive");
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  auto const n = static_cast<int>(gradient.size());
  long double const y = y_scale;
  long double const scale = std::pow(y, n);
  long double const delta =
      static_cast<long double>(tol) * scale / (2 * n * std::pow(2 + y, n - 1));
  long double direct = 1;
  long double offset_sq = 0;
  for (Integer g : gradient) {
    long double const phase = Frac(static_cast<long double>(beta) * static_cast<long double>(g));
    direct *= 1 + 2 * GaussianCosineSeries(phase, y, delta / 2);
    long double const dist = DistanceToInteger(phase);
    offset_sq += dist * dist;
  }
  SBetaValue out;
  out.direct = static_cast<double>(direct);
  out.poisson = static_cast<double>(scale * std::exp(-kPi * y * y * offset_sq));
  return out;
}

SBetaValue SBeta(Form const& f, std::span<Integer const> x, double beta, double y_scale,
                 double tol) {
  f.CheckLength(x);
  IntVector const grad = Gradient(f, x);
  return SBetaForGradient(grad, beta, y_scale, tol);
}

MajorArcIntegral MajorArcIntegrate(Form const& f, std::span<Integer const> x,
                                   ArcConfig const& config, double tol) {
  config.Validate();
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  f.CheckLength(x);
  IntVector const grad = Gradient(f, x);
  Integer const h = GcdGradient(f, x);
  long double grad_norm_sq = 0;
  for (Integer g : grad) grad_norm_sq += static_cast<long double>(g) * static_cast<long double>(g);
  long double const grad_norm = std::sqrt(grad_norm_sq);
  long double const y = config.y_scale;
  int const n = f.n_vars();
  long double const q_max = config.DenominatorBound();

  MajorArcIntegral out;
  out.grad_gcd = h;
  out.prediction =
      static_cast<double>(std::pow(y, n - 1) * static_cast<long double>(h) / grad_norm);
  out.flagged = static_cast<long double>(h) * config.c_f * config.c_f > q_max;

  std::vector<Arc> arcs;
  long double const gradient_cap = std::pow(y, config.eta - 1) / grad_norm;
  for (Integer q = 1; q <= h && static_cast<long double>(q) <= q_max; ++q) {
    if (h % q != 0) continue;
    long double const half = std::min(gradient_cap, static_cast<long double>(config.ArcWidth()) / q);
    for (Integer a = 0; a < q; ++a) {
      if (Gcd(a, q) != 1) continue;
      arcs.push_back({static_cast<long double>(a) / q, half, a, q});
    }
  }
  std::sort(arcs.begin(), arcs.end(),
            [](Arc const& l, Arc const& r) { return l.center < r.center; });
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    Arc const& cur = arcs[i];
    Arc const& nxt = arcs[(i + 1) % arcs.size()];
    long double gap = nxt.center - cur.center;
    if (i + 1 == arcs.size()) gap += 1;
    if (gap < cur.half_width + nxt.half_width) {
      throw DomainError("modified major arcs around " + std::to_string(cur.a) + "/" +
                        std::to_string(cur.q) + " overlap; C_f is too small");
    }
  }

  long double const abs_tol =
      static_cast<long double>(tol) * out.prediction / std::max<std::size_t>(arcs.size(), 1);
  long double const inner_tol = tol * 1e-3;
  long double total = 0;
  for (Arc const& arc : arcs) {
    auto const g = [&](long double theta) {
      double const beta = static_cast<double>(arc.center + theta);
      return static_cast<long double>(SBetaForGradient(grad, beta, config.y_scale,
                                                       static_cast<double>(inner_tol))
                                          .direct);
    };
    total += Integrate(g, -arc.half_width, arc.half_width, abs_tol);
  }
  out.integral = static_cast<double>(total);
  out.arcs = static_cast<int>(arcs.size());
  out.relative_deviation = std::fabs(out.integral - out.prediction) / out.prediction;
  return out;
}

double CalibrateArcConstant(Form const& f, std::span<IntVector const> points,
                            ArcConfig const& config) {
  if (points.empty()) throw DomainError("calibration needs at least one point");
  long double const scale = std::pow(static_cast<long double>(config.x_scale), f.degree() - 1);
  long double sup = 0;
  long double inf = std::numeric_limits<long double>::infinity();
  for (auto const& x : points) {
    IntVector const grad = Gradient(f, x);
    long double norm_sq = 0;
    for (Integer g : grad) {
      sup = std::max(sup, std::fabs(static_cast<long double>(g)));
      norm_sq += static_cast<long double>(g) * static_cast<long double>(g);
    }
    if (norm_sq == 0) throw SingularPoint("calibration point with ∇f(x) = 0");
    inf = std::min(inf, std::sqrt(norm_sq));
  }
  long double const c = std::max({4 * sup / scale, scale / inf,
                                  2 * static_cast<long double>(config.DenominatorBound()) / scale});
  return static_cast<double>(2 * c);
}

std::vector<IntVector> OpenBallPoints(int n, double p, NormKind norm, Budget& budget) {
  if (n < 1) throw DomainError("dimension must be ≥ 1");
  Integer const t_max = StrictBound(p);
  // largest integer s with s < p²
  Rational const p_sq = ToRational(p) * ToRational(p);
  mpz_class ceil_sq;
  mpz_cdiv_q(ceil_sq.get_mpz_t(), p_sq.get_num_mpz_t(), p_sq.get_den_mpz_t());
  Integer const norm_limit = ceil_sq.get_si() - 1;
  std::vector<IntVector> out;
  IntVector u;
  BallRecurse(n, t_max, norm_limit, norm, u, 0, out, budget);
  return out;
}

std::int64_t CountM(double tau, Form const& f, double p, double q, NormKind norm,
                    std::uint64_t budget) {
  if (!(q > 0)) throw DomainError("Q must be positive");
  std::size_t tuples = 0;
  std::vector<IntVector> const points = TuplePoints(f, p, norm, budget, tuples);
  long double const t = tau;
  long double const threshold = 1 / static_cast<long double>(q);
  return CountTuples(f, points, tuples, [&](Integer m) {
    return DistanceToInteger(t * static_cast<long double>(m)) < threshold;
  });
}

std::int64_t CountMultilinearZeros(Form const& f, double u, NormKind norm,
                                   std::uint64_t budget) {
  std::size_t tuples = 0;
  std::vector<IntVector> const points = TuplePoints(f, u, norm, budget, tuples);
  return CountTuples(f, points, tuples, [](Integer m) { return m == 0; });
}

std::int64_t CountShrink(std::vector<std::vector<double>> const& gamma, double p, double q,
                         NormKind norm, std::uint64_t budget_limit) {
  auto const n = static_cast<int>(gamma.size());
  for (auto const& row : gamma) {
    if (static_cast<int>(row.size()) != n) throw DimensionMismatch("γ must be square");
  }
  if (!(q > 0)) throw DomainError("Q must be positive");
  Budget budget(budget_limit);
  std::vector<IntVector> const points = OpenBallPoints(n, p, norm, budget);
  long double const threshold = 1 / static_cast<long double>(q);
  std::int64_t count = 0;
  for (auto const& x : points) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      long double s = 0;
      for (int j = 0; j < n; ++j) {
        s += static_cast<long double>(gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
             static_cast<long double>(x[static_cast<std::size_t>(j)]);
      }
      ok = DistanceToInteger(s) < threshold;
    }
    if (ok) ++count;
  }
  return count;
}

double ShrinkRatio(std::vector<std::vector<double>> const& gamma, double p, double q,
                   double theta, NormKind norm, std::uint64_t budget) {
  if (!(theta > 0 && theta <= 1)) throw DomainError("θ must lie in (0, 1]");
  std::int64_t const top = CountShrink(gamma, p, q, norm, budget);
  std::int64_t const bottom = CountShrink(gamma, theta * p, q / theta, norm, budget);
  return static_cast<double>(top) / static_cast<double>(bottom);
}

Lemma23Hypotheses Lemma23Check(Integer m, Integer a, Integer q, double z, double m_bound,
                               double r) {
  if (q < 1) throw DomainError("q must be ≥ 1");
  if (Gcd(a, q) != 1) throw DomainError("a/q must be in lowest terms");
  if (!(m_bound > 0) || !(r > 0)) throw DomainError("M and R must be positive");
  Rational const zq = ToRational(z);
  Rational const mq = ToRational(m_bound);
  Rational const rq = ToRational(r);
  Rational frac_aq{mpz_class(a), mpz_class(q)};
  frac_aq.canonicalize();
  Rational const alpha = frac_aq + zq;
  Lemma23Hypotheses h;
  h.m_bounded = Abs(Rational(m)) <= mq;
  h.near_integer = DistanceToInteger(alpha * Rational(m)) * rq < 1;
  h.z_small = 2 * Rational(q) * mq * Abs(zq) <= 1;
  h.q_small = 2 * Rational(q) <= rq;
  h.q_large = Rational(q) > mq || (zq != 0 && Rational(q) * Abs(zq) * rq > 1);
  return h;
}

bool Lemma23Holds(Integer m, Integer a, Integer q, double z, double m_bound, double r) {
  return !Lemma23Check(m, a, q, z, m_bound, r).all() || m == 0;
}

Rational CDn(int d, int n) {
  if (d < 3 || n < 1) throw DomainError("c_{d,n} needs d ≥ 3 and n ≥ 1");
  mpz_class const pow2 = mpz_class(1) << d;
  mpz_class const tail = 3 * mpz_class(d - 1) * pow2;
  mpz_class const num = 2 * mpz_class(n) - tail;
  mpz_class const den = mpz_class(n) * (d * d - 2 * d + 3) - tail;
  if (den == 0) {
    throw DomainError("c_{d,n} is undefined for d = " + std::to_string(d) +
                      ", n = " + std::to_string(n));
  }
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational ExponentD(int d, int n) {
  if (d < 2 || n < 1) throw DomainError("exponent needs d ≥ 2 and n ≥ 1");
  Rational out(mpz_class(n), (mpz_class(1) << (d - 1)) * (d - 1));
  out.canonicalize();
  return out;
}

Rational ExponentE(int d, int n) {
  if (d < 2 || n < 1) throw DomainError("exponent needs d ≥ 2 and n ≥ 1");
  Rational out(mpz_class(n), (mpz_class(1) << (d - 2)) * (d - 1));
  out.canonicalize();
  return out;
}

}  // namespace freepoints

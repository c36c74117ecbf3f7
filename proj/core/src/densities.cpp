#include "freepoints/densities.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "real_roots.hpp"

namespace freepoints {

namespace {

Integer ModPow(Integer base, int e, Integer m) {
  Wide r = 1 % m;
  Wide b = ((base % m) + m) % m;
  for (int i = 0; i < e; ++i) r = r * b % m;
  return static_cast<Integer>(r);
}

Integer PrimePower(Integer p, int k) {
  Integer m = 1;
  for (int i = 0; i < k; ++i) m = CheckedMul(m, p);
  if (m > (Integer{1} << 31)) throw Overflow("modulus p^k too large");
  return m;
}

Wide DiagonalCount(std::vector<Integer> const& a, int degree, Integer m, Budget& budget) {
  auto const size = static_cast<std::size_t>(m);
  std::vector<Wide> dist(size, 0);
  dist[0] = 1;
  std::vector<Wide> next(size);
  std::vector<std::pair<std::size_t, Wide>> values;
  for (Integer coeff : a) {
    std::vector<Wide> hist(size, 0);
    for (Integer t = 0; t < m; ++t) {
      Wide const v = (static_cast<Wide>(((coeff % m) + m) % m) * ModPow(t, degree, m)) % m;
      ++hist[static_cast<std::size_t>(v)];
    }
    values.clear();
    for (std::size_t v = 0; v < size; ++v) {
      if (hist[v] != 0) values.emplace_back(v, hist[v]);
    }
    budget.Charge(static_cast<std::uint64_t>(values.size()) * size);
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t s = 0; s < size; ++s) {
      if (dist[s] == 0) continue;
      for (auto const& [v, c] : values) {
        std::size_t const target = (s + v) % size;
        next[target] += dist[s] * c;
      }
    }
    std::swap(dist, next);
  }
  return dist[0];
}

Wide GenericCount(Form const& f, Integer m, Budget& budget) {
  int const n = f.n_vars();
  long double const total = std::pow(static_cast<long double>(m), n);
  if (total > static_cast<long double>(budget.limit() - budget.used())) {
    throw BudgetExceeded("p^{kn} = " + FormatDouble(static_cast<double>(total)) +
                         " residues exceed the node budget");
  }
  budget.Charge(static_cast<std::uint64_t>(total));
  struct Term {
    Wide coefficient;
    std::vector<int> exponents;
  };
  std::vector<Term> terms;
  for (auto const& mono : f.monomials()) {
    terms.push_back({((mono.coefficient % m) + m) % m, mono.exponents});
  }
  // powers[i][t] = t^i mod m
  std::vector<std::vector<Wide>> powers(static_cast<std::size_t>(f.degree() + 1),
                                        std::vector<Wide>(static_cast<std::size_t>(m)));
  for (Integer t = 0; t < m; ++t) {
    for (int e = 0; e <= f.degree(); ++e) {
      powers[static_cast<std::size_t>(e)][static_cast<std::size_t>(t)] = ModPow(t, e, m);
    }
  }
  IntVector x(static_cast<std::size_t>(n), 0);
  Wide count = 0;
  for (;;) {
    Wide value = 0;
    for (auto const& term : terms) {
      Wide v = term.coefficient;
      for (int i = 0; i < n; ++i) {
        int const e = term.exponents[static_cast<std::size_t>(i)];
        if (e) v = v * powers[static_cast<std::size_t>(e)][static_cast<std::size_t>(x[static_cast<std::size_t>(i)])] % m;
      }
      value += v;
    }
    if (value % m == 0) ++count;
    int i = n - 1;
    for (; i >= 0; --i) {
      if (++x[static_cast<std::size_t>(i)] < m) break;
      x[static_cast<std::size_t>(i)] = 0;
    }
    if (i < 0) break;
  }
  return count;
}

// Radical inverse in base b.
double Halton(std::uint64_t index, unsigned base) {
  double result = 0;
  double f = 1;
  while (index > 0) {
    f /= base;
    result += f * static_cast<double>(index % base);
    index /= base;
  }
  return result;
}

// |{t ∈ [−s, s] : |p(t)| < τ}|
long double WindowMeasure(std::vector<long double> p, long double s, long double tau) {
  internal::Trim(p);
  if (p.empty()) return 2 * s;
  std::vector<long double> cuts{-s, s};
  std::vector<long double> shifted = p;
  shifted[0] = p[0] - tau;
  for (long double r : internal::RealRoots(shifted, -s, s)) cuts.push_back(r);
  shifted[0] = p[0] + tau;
  for (long double r : internal::RealRoots(shifted, -s, s)) cuts.push_back(r);
  std::sort(cuts.begin(), cuts.end());
  long double measure = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    long double const lo = cuts[i];
    long double const hi = cuts[i + 1];
    if (hi <= lo) continue;
    if (std::fabs(internal::Evaluate(p, (lo + hi) / 2)) < tau) measure += hi - lo;
  }
  return measure;
}

Wide SolutionCount(Form const& f, Integer p, int k, Budget& budget) {
  Integer const m = PrimePower(p, k);
  auto const diagonal = f.diagonal_coefficients();
  return diagonal ? DiagonalCount(*diagonal, f.degree(), m, budget)
                  : GenericCount(f, m, budget);
}

Rational Normalize(Wide count, Integer p, int k, int n) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(k) * static_cast<unsigned long>(n - 1));
  Rational out = ToRational(count) / Rational(scale);
  out.canonicalize();
  return out;
}

void CheckPrimeLevel(Integer p, int k) {
  if (!IsPrime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (k < 1) throw DomainError("level k must be ≥ 1");
}

}  // namespace

Rational SigmaP(Form const& f, Integer p, int k, std::uint64_t budget_limit) {
  CheckPrimeLevel(p, k);
  Budget budget(budget_limit);
  return Normalize(SolutionCount(f, p, k, budget), p, k, f.n_vars());
}

Rational SigmaPPrimitive(Form const& f, Integer p, int k, std::uint64_t budget_limit) {
  CheckPrimeLevel(p, k);
  Budget budget(budget_limit);
  int const n = f.n_vars();
  int const d = f.degree();
  Wide const all = SolutionCount(f, p, k, budget);
  // x = p·y with y mod p^{k−1}; f(py) = p^d f(y)
  Wide vertex = 0;
  if (k <= d) {
    vertex = 1;
    for (int i = 0; i < (k - 1) * n; ++i) vertex = WideMul(vertex, p);
  } else {
    vertex = SolutionCount(f, p, k - d, budget);
    for (int i = 0; i < (d - 1) * n; ++i) vertex = WideMul(vertex, p);
  }
  return Normalize(all - vertex, p, k, n);
}

SigmaInfEstimate SigmaInf(int n_vars, SlicePolynomial const& slice, double tol,
                          SigmaInfOptions const& options) {
  if (n_vars < 2) throw DomainError("σ_∞ needs at least two variables");
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  if (options.taus.empty()) throw DomainError("need at least one τ");
  for (double tau : options.taus) {
    if (!(tau > 0)) throw DomainError("τ must be positive");
  }
  if (options.shifts < 2) throw DomainError("need at least two shifts for an error estimate");
  if (options.points_per_shift == 0) throw DomainError("points per shift must be positive");

  int const dim = n_vars - 1;
  std::vector<unsigned> bases;
  for (Integer prime : PrimesUpTo(1000)) {
    if (static_cast<int>(bases.size()) == dim) break;
    bases.push_back(static_cast<unsigned>(prime));
  }
  if (static_cast<int>(bases.size()) < dim) throw DomainError("too many variables for σ_∞");

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto const shifts = static_cast<std::size_t>(options.shifts);
  std::vector<std::vector<double>> offset(shifts, std::vector<double>(static_cast<std::size_t>(dim)));
  for (auto& row : offset) {
    for (auto& v : row) v = uniform(rng);
  }

  std::size_t const n_tau = options.taus.size();
  // sums[s][j]: Σ window measure for shift s and τ_j
  std::vector<std::vector<long double>> sums(shifts, std::vector<long double>(n_tau, 0));
  long double const cube = std::ldexp(1.0L, dim);
  std::vector<double> xp(static_cast<std::size_t>(dim));

  SigmaInfEstimate out;
  out.seed = options.seed;
  std::uint64_t done = 0;
  std::uint64_t target = options.points_per_shift;
  for (;;) {
    for (std::size_t s = 0; s < shifts; ++s) {
      for (std::uint64_t j = done; j < target; ++j) {
        long double norm_sq = 0;
        for (int i = 0; i < dim; ++i) {
          double u = Halton(j + 1, bases[static_cast<std::size_t>(i)]) +
                     offset[s][static_cast<std::size_t>(i)];
          if (u >= 1) u -= 1;
          xp[static_cast<std::size_t>(i)] = 2 * u - 1;
          norm_sq += static_cast<long double>(xp[static_cast<std::size_t>(i)]) *
                     xp[static_cast<std::size_t>(i)];
        }
        if (norm_sq >= 1) continue;
        long double const half = std::sqrt(1 - norm_sq);
        std::vector<long double> const poly = slice(xp);
        for (std::size_t t = 0; t < n_tau; ++t) {
          sums[s][t] += WindowMeasure(poly, half, options.taus[t]);
        }
      }
    }
    done = target;

    out.tau_values.assign(n_tau, 0);
    out.tau_errors.assign(n_tau, 0);
    for (std::size_t t = 0; t < n_tau; ++t) {
      long double const norm = cube / (2 * static_cast<long double>(options.taus[t]) *
                                       static_cast<long double>(done));
      long double mean = 0;
      for (std::size_t s = 0; s < shifts; ++s) mean += sums[s][t] * norm;
      mean /= static_cast<long double>(shifts);
      long double var = 0;
      for (std::size_t s = 0; s < shifts; ++s) {
        long double const d = sums[s][t] * norm - mean;
        var += d * d;
      }
      var /= static_cast<long double>(shifts - 1);
      out.tau_values[t] = static_cast<double>(mean);
      out.tau_errors[t] = static_cast<double>(std::sqrt(var / static_cast<long double>(shifts)));
    }
    out.value = out.tau_values.back();
    out.std_error = out.tau_errors.back();
    if (out.std_error <= tol * std::fabs(out.value) || target >= options.max_points_per_shift) {
      break;
    }
    target = std::min(target * 2, options.max_points_per_shift);
  }
  out.tau = options.taus.back();
  out.points_per_shift = done;
  out.converged = true;
  for (std::size_t t = 0; t + 1 < n_tau; ++t) {
    double const spread = std::hypot(out.tau_errors[t], out.tau_errors[t + 1]);
    if (std::fabs(out.tau_values[t] - out.tau_values[t + 1]) > 3 * spread) out.converged = false;
  }
  return out;
}

SigmaInfEstimate SigmaInf(Form const& f, double tol, SigmaInfOptions const& options) {
  int const n = f.n_vars();
  struct Term {
    long double coefficient;
    std::vector<int> exponents;
    int last;
  };
  std::vector<Term> terms;
  for (auto const& m : f.monomials()) {
    terms.push_back({static_cast<long double>(m.coefficient),
                     std::vector<int>(m.exponents.begin(), m.exponents.end() - 1),
                     m.exponents.back()});
  }
  int const degree = f.degree();
  SlicePolynomial slice = [terms, degree](std::span<double const> xp) {
    std::vector<long double> poly(static_cast<std::size_t>(degree + 1), 0);
    for (auto const& term : terms) {
      long double v = term.coefficient;
      for (std::size_t i = 0; i < term.exponents.size(); ++i) {
        for (int e = 0; e < term.exponents[i]; ++e) v *= xp[i];
      }
      poly[static_cast<std::size_t>(term.last)] += v;
    }
    return poly;
  };
  return SigmaInf(n, slice, tol, options);
}

DensityEstimate LeadingConstant(Form const& f, Integer p_max, double tol,
                                SigmaInfOptions const& options, std::uint64_t budget) {
  if (p_max < 2) throw DomainError("p_max must be ≥ 2");
  std::optional<mpz_class> disc = f.discriminant_abs();
  if (!disc) {
    if (auto const diag = f.diagonal_coefficients()) {
      disc = DiagonalDiscriminant(*diag, f.degree());
    }
  }
  DensityEstimate out;
  out.p_max = p_max;
  out.sigma_inf = SigmaInf(f, tol, options);
  double running = out.sigma_inf.value;
  for (Integer p : PrimesUpTo(p_max)) {
    bool const bad = f.degree() % p == 0 || (disc && *disc != 0 && mpz_divisible_ui_p(
                                                 disc->get_mpz_t(), static_cast<unsigned long>(p)));
    int const level = bad ? 2 : 1;
    out.levels[p] = level;
    out.sigma_p[p] = SigmaP(f, p, level, budget);
    if (bad) {
      out.bad_primes.push_back(p);
      out.sigma_p_next[p] = SigmaP(f, p, level + 1, budget);
    }
    running *= ToDouble(out.sigma_p[p]);
    out.partial_products.emplace_back(p, running);
  }
  out.product = running;
  return out;
}

}  // namespace freepoints

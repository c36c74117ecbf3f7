#include "freepoints/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "freepoints/circle.hpp"
#include "freepoints/densities.hpp"
#include "freepoints/freeness.hpp"
#include "freepoints/lattices.hpp"
#include "freepoints/theta.hpp"

namespace freepoints {

bool SuiteReport::passed() const {
  return std::all_of(results.begin(), results.end(),
                     [](PropertyResult const& r) { return r.passed; });
}

namespace {

using Rng = std::mt19937_64;

Integer Uniform(Rng& rng, Integer lo, Integer hi) {
  return std::uniform_int_distribution<Integer>(lo, hi)(rng);
}

Lattice RandomLattice(Rng& rng, int max_rank, Integer entry_bound) {
  for (;;) {
    int const r = static_cast<int>(Uniform(rng, 1, max_rank));
    int const n = static_cast<int>(Uniform(rng, r, max_rank));
    std::vector<IntVector> basis(static_cast<std::size_t>(r), IntVector(static_cast<std::size_t>(n)));
    for (auto& row : basis) {
      for (auto& v : row) v = Uniform(rng, -entry_bound, entry_bound);
    }
    Lattice lattice = Lattice::FromIntegers(basis);
    if (Determinant(lattice.gram()) != 0) return lattice;
  }
}

IntVector RandomPrimitive(Rng& rng, int n, Integer bound) {
  for (;;) {
    IntVector c(static_cast<std::size_t>(n));
    for (auto& v : c) v = Uniform(rng, -bound, bound);
    if (IsPrimitive(c)) return c;
  }
}

class Collector {
 public:
  Collector(std::string suite, SuiteReport& report) : suite_(std::move(suite)), report_(report) {}

  // Runs `body`, which returns the number of checked instances and appends
  // failures to `failures`; an exception counts as a failure.
  void Property(std::string name, std::function<std::int64_t(std::vector<std::string>&)> body) {
    PropertyResult result;
    result.suite = suite_;
    result.name = std::move(name);
    std::vector<std::string> failures;
    try {
      result.checked = body(failures);
    } catch (std::exception const& e) {
      failures.push_back(std::string("exception: ") + e.what());
    }
    result.passed = failures.empty();
    std::ostringstream detail;
    for (std::size_t i = 0; i < failures.size() && i < 5; ++i) detail << (i ? "; " : "") << failures[i];
    if (failures.size() > 5) detail << "; … " << failures.size() - 5 << " more";
    result.detail = detail.str();
    report_.results.push_back(std::move(result));
  }

  void Record(std::string name, std::int64_t checked, std::string detail) {
    report_.results.push_back({suite_, std::move(name), true, checked, std::move(detail)});
  }

 private:
  std::string suite_;
  SuiteReport& report_;
};

void LatticeSuite(VerifyOptions const& options, SuiteReport& report) {
  Collector c("lattices", report);
  Rng rng(options.seed);
  std::vector<Lattice> corpus;
  for (int i = 0; i < options.samples; ++i) corpus.push_back(RandomLattice(rng, 6, 20));

  c.Property("minkowski", [&](auto& failures) {
    for (auto const& lattice : corpus) {
      int const r = lattice.rank();
      Rational const det_sq = DeterminantSq(lattice);
      Rational prod = 1;
      for (auto const& s : SuccessiveMinima(lattice).minima_sq) prod *= s;
      double const constant = std::pow(2.0, r) / UnitBallVolume(r);
      bool const lower = det_sq <= prod;
      bool const upper = ToLongDouble(prod) <=
                         ToLongDouble(det_sq) * constant * constant * (1 + 1e-12L);
      if (!lower || !upper) failures.push_back(lattice.ToString());
    }
    return static_cast<std::int64_t>(corpus.size());
  });

  c.Property("transference", [&](auto& failures) {
    for (auto const& lattice : corpus) {
      int const r = lattice.rank();
      auto const primal = SuccessiveMinima(lattice).minima_sq;
      auto const dual = SuccessiveMinima(Dual(lattice)).minima_sq;
      for (int k = 0; k < r; ++k) {
        Rational const p = primal[static_cast<std::size_t>(k)] * dual[static_cast<std::size_t>(r - 1 - k)];
        if (p < 1 || p > Rational(r * r)) failures.push_back(lattice.ToString());
      }
    }
    return static_cast<std::int64_t>(corpus.size());
  });

  c.Property("kernel_determinant", [&](auto& failures) {
    for (int i = 0; i < options.samples; ++i) {
      int const n = static_cast<int>(Uniform(rng, 2, 8));
      IntVector const v = RandomPrimitive(rng, n, 30);
      if (DeterminantSq(KernelLattice(v)) != Rational(NormSq(v))) failures.push_back(JoinColon(v));
    }
    return static_cast<std::int64_t>(options.samples);
  });

  c.Property("scaling", [&](auto& failures) {
    for (auto const& lattice : corpus) {
      Rational lambda(mpz_class(Uniform(rng, 1, 7)), mpz_class(Uniform(rng, 1, 5)));
      lambda.canonicalize();
      auto const base = SuccessiveMinima(lattice).minima_sq;
      auto const scaled = SuccessiveMinima(lattice.Scaled(lambda)).minima_sq;
      for (std::size_t k = 0; k < base.size(); ++k) {
        if (scaled[k] != base[k] * lambda * lambda) failures.push_back(lattice.ToString());
      }
    }
    return static_cast<std::int64_t>(corpus.size());
  });

  c.Property("quotient_projection", [&](auto& failures) {
    std::int64_t checked = 0;
    for (auto const& lattice : corpus) {
      if (lattice.rank() < 2) continue;
      auto const minima = SuccessiveMinima(lattice);
      RationalVector const& x = minima.witnesses.front();
      auto const quotient = SuccessiveMinima(QuotientModVector(lattice, x)).minima_sq;
      Rational const x_sq = lattice.NormSq(x);
      for (std::size_t k = 0; k < quotient.size(); ++k) {
        if (quotient[k] * x_sq > minima.minima_sq[k + 1]) failures.push_back(lattice.ToString());
      }
      ++checked;
    }
    return checked;
  });
}

void ThetaSuite(VerifyOptions const& options, SuiteReport& report) {
  Collector c("theta", report);
  Rng rng(options.seed + 1);
  struct Case {
    Lattice lattice;
    double radius;
  };
  std::vector<Case> cases;
  for (int i = 0; i < options.samples; ++i) {
    Lattice lattice = RandomLattice(rng, 4, 20);
    double const scale = std::pow(ToDouble(DeterminantSq(lattice)), 0.5 / lattice.rank());
    for (double f : {0.25, 0.5, 1.0, 2.0, 4.0}) cases.push_back({lattice, f * scale});
  }
  double const tol = kDefaultThetaTol;

  c.Property("poisson_residual", [&](auto& failures) {
    for (auto const& k : cases) {
      double const res = PoissonResidual(k.lattice, k.radius, tol);
      if (!(res <= 4 * tol)) {
        failures.push_back(k.lattice.ToString() + " R=" + FormatDouble(k.radius) +
                           " residual=" + FormatDouble(res));
      }
    }
    return static_cast<std::int64_t>(cases.size());
  });

  c.Property("majorant_domination", [&](auto& failures) {
    for (auto const& k : cases) {
      bool const indicator = SkewIndicator(k.lattice, k.radius);
      double const majorant = SkewMajorant(k.lattice, k.radius, tol);
      if (majorant < (indicator ? 1.0 : 0.0)) {
        failures.push_back(k.lattice.ToString() + " R=" + FormatDouble(k.radius));
      }
    }
    return static_cast<std::int64_t>(cases.size());
  });

  c.Property("bracket_nonnegativity", [&](auto& failures) {
    for (auto const& k : cases) {
      double const theta = ThetaSum(k.lattice, k.radius, tol).value;
      double const main = std::pow(k.radius, k.lattice.rank()) /
                          std::sqrt(ToDouble(DeterminantSq(k.lattice)));
      if (theta - main < -4 * tol * std::max(1.0, main)) {
        failures.push_back(k.lattice.ToString() + " R=" + FormatDouble(k.radius));
      }
    }
    return static_cast<std::int64_t>(cases.size());
  });

  c.Property("scaling_covariance", [&](auto& failures) {
    for (auto const& k : cases) {
      double const a = ThetaSum(k.lattice, k.radius, tol).value;
      double const b = ThetaSum(k.lattice.Scaled(3), 3 * k.radius, tol).value;
      if (std::fabs(a - b) > 4 * tol * std::max(1.0, a)) {
        failures.push_back(k.lattice.ToString() + " R=" + FormatDouble(k.radius));
      }
    }
    return static_cast<std::int64_t>(cases.size());
  });
}

void FreenessSuite(VerifyOptions const&, SuiteReport& report) {
  Collector c("freeness", report);
  Form const f = Form::Diagonal({1, 1, 1, 1}, 3);
  SurveyConfig config;
  config.bound = 20;
  SurveyResult const survey = FreenessSurvey(f, config);

  c.Property("determinant_identity", [&](auto& failures) {
    for (auto const& r : survey.records) {
      Wide g2 = 0;
      for (Integer g : Gradient(f, r.x)) g2 = WideAdd(g2, WideMul(g, g));
      if (r.det_sq * Rational(r.grad_gcd) * Rational(r.grad_gcd) != ToRational(g2)) {
        failures.push_back(JoinColon(r.x));
      }
    }
    return static_cast<std::int64_t>(survey.records.size());
  });

  c.Property("freeness_upper_bound", [&](auto& failures) {
    for (auto const& r : survey.records) {
      double const bound =
          1 - std::log(ToDouble(r.minima_sq.front())) / std::log(static_cast<double>(r.norm_sq));
      if (r.freeness > bound + 1e-12 || bound > 1 + 1e-12) failures.push_back(JoinColon(r.x));
    }
    return static_cast<std::int64_t>(survey.records.size());
  });

  c.Property("threshold_duality", [&](auto& failures) {
    std::int64_t checked = 0;
    for (double eps : {0.0, 0.05, 0.1, 0.2, 0.3, 1.0 / 3, 0.5}) {
      for (auto const& r : survey.records) {
        if (IsFree(r, eps) != IsFreeByValue(r, eps)) failures.push_back(JoinColon(r.x));
        ++checked;
      }
    }
    return checked;
  });

  c.Property("partition", [&](auto& failures) {
    auto const total = survey.n_free + survey.n_skew + static_cast<std::int64_t>(survey.excluded.size());
    if (total != survey.n_total) failures.push_back("counts do not add up");
    return std::int64_t{1};
  });

  c.Property("line_points_negative", [&](auto& failures) {
    std::int64_t checked = 0;
    for (auto const& r : survey.records) {
      auto const& x = r.x;
      bool const line = (x[0] == -x[1] && x[2] == -x[3]) || (x[0] == -x[2] && x[1] == -x[3]) ||
                        (x[0] == -x[3] && x[1] == -x[2]);
      if (!line || r.norm_sq <= 100) continue;
      ++checked;
      if (!(r.freeness < 0)) failures.push_back(JoinColon(x));
    }
    return checked;
  });
}

void CircleSuite(VerifyOptions const& options, SuiteReport& report) {
  Collector c("circle", report);
  Rng rng(options.seed + 3);

  c.Property("dirichlet", [&](auto& failures) {
    std::uniform_real_distribution<double> alpha(-5.0, 5.0);
    int const count = options.samples * 10;
    for (int i = 0; i < count; ++i) {
      double const a = alpha(rng);
      double const q_bound = static_cast<double>(Uniform(rng, 1, 1000));
      RationalApprox const r = DirichletApprox(a, q_bound);
      bool const ok = Gcd(r.a, r.q) == 1 && r.q <= q_bound && r.a >= 0 && r.a < r.q &&
                      std::fabs(r.remainder) <= 1 / (r.q * q_bound) * (1 + 1e-12);
      if (!ok) failures.push_back(FormatDouble(a));
    }
    return static_cast<std::int64_t>(count);
  });

  c.Property("arc_membership", [&](auto& failures) {
    std::int64_t checked = 0;
    for (ArcConfig const& config : {ArcConfig::FromRadius(50, 5, 0, 0.1, 1, 3),
                                    ArcConfig::FromRadius(100, 10, 0.2, 0.1, 0.5, 3)}) {
      long double const width = config.ArcWidth();
      auto const q_max = static_cast<Integer>(std::floor(config.DenominatorBound()));
      for (int i = 0; i < 1000; ++i) {
        double const beta = i / 1000.0;
        bool brute = false;
        for (Integer q = 1; q <= q_max && !brute; ++q) {
          for (Integer a = 0; a < q && !brute; ++a) {
            brute = Gcd(a, q) == 1 &&
                    std::fabs(static_cast<long double>(beta) * q - a) <= width;
          }
        }
        if (IsMajorArc(beta, config).has_value() != brute) failures.push_back(FormatDouble(beta));
        ++checked;
      }
    }
    return checked;
  });

  c.Property("lemma23_grid", [&](auto& failures) {
    std::int64_t checked = 0;
    double const m_bound = 10;
    double const r = 20;
    for (Integer q = 1; q <= 10; ++q) {
      double const z_max = 1 / (2 * q * m_bound);
      for (Integer a = 0; a < q; ++a) {
        if (Gcd(a, q) != 1) continue;
        for (int zi = -8; zi <= 8; ++zi) {
          double const z = z_max * zi / 8;
          for (Integer m = -10; m <= 10; ++m) {
            if (!Lemma23Holds(m, a, q, z, m_bound, r)) {
              failures.push_back(std::to_string(m) + "," + std::to_string(a) + "/" +
                                 std::to_string(q) + "," + FormatDouble(z));
            }
            ++checked;
          }
        }
      }
    }
    return checked;
  });

  c.Property("exponent_identity", [&](auto& failures) {
    std::int64_t checked = 0;
    for (int d = 3; d <= 5; ++d) {
      for (int n = 1; n <= 200; ++n) {
        if (ExponentE(d, n) != 2 * ExponentD(d, n)) failures.push_back(std::to_string(n));
        ++checked;
      }
    }
    if (CDn(3, 25) != Rational(1, 51)) failures.push_back("c(3,25) != 1/51");
    return checked;
  });

  c.Property("s_beta_agreement", [&](auto& failures) {
    Form const f = Form::Diagonal({1, 1, 1, 1}, 3);
    ArcConfig const config = ArcConfig::FromRadius(60, 6, 0, 0.1, 2, 3);
    IntVector const x{1, -1, 2, -2};
    Integer const h = GcdGradient(f, x);
    double const grad_norm = std::sqrt(static_cast<double>(NormSq(Gradient(f, x))));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double const tol = 1e-10;
    std::int64_t checked = 0;
    for (Integer q = 1; q <= h; ++q) {
      if (h % q) continue;
      for (Integer a = 0; a < q; ++a) {
        if (Gcd(a, q) != 1) continue;
        for (int i = 0; i < 10; ++i) {
          double const theta = unit(rng) * std::pow(config.y_scale, config.eta - 1) / grad_norm;
          double const beta = static_cast<double>(a) / static_cast<double>(q) + theta;
          SBetaValue const v = SBeta(f, x, beta, config.y_scale, tol);
          if (std::fabs(v.direct - v.poisson) > 4 * tol * std::pow(config.y_scale, 4)) {
            failures.push_back(FormatDouble(beta));
          }
          ++checked;
        }
      }
    }
    return checked;
  });

  {
    Form const f = Form::Diagonal({1, 1, 1, 1}, 3);
    ArcConfig const config = ArcConfig::FromRadius(60, 6, 0, 0.1, 2, 3);
    IntVector const x{1, -1, 2, -2};
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0;
    int minor = 0;
    while (minor < 50) {
      double const beta = unit(rng);
      if (IsMajorArc(beta, config)) continue;
      worst = std::max(worst, std::fabs(SBeta(f, x, beta, config.y_scale).direct) /
                                  std::pow(config.y_scale, 4));
      ++minor;
    }
    c.Record("minor_arc_decay", minor, "max |S(β)|/Yⁿ = " + FormatDouble(worst));
  }
}

void DensitySuite(VerifyOptions const& options, SuiteReport& report) {
  Collector c("densities", report);
  Rng rng(options.seed + 4);
  Form const f4 = Form::Diagonal({1, 1, 1, 1}, 3);
  Form const d6 = Form::Diagonal({1, 1, 1, 1, 1, 1}, 3);

  c.Property("known_values", [&](auto& failures) {
    if (SigmaP(f4, 2, 1) != 1) failures.push_back("σ₂(F₄) ≠ 1");
    if (SigmaP(f4, 3, 1) != 1) failures.push_back("σ₃(F₄) ≠ 1");
    return std::int64_t{2};
  });

  c.Property("zero_residue_floor", [&](auto& failures) {
    std::int64_t checked = 0;
    for (Integer p : {2, 3, 5, 7}) {
      for (int k : {1, 2}) {
        Rational floor = 1;
        for (int i = 0; i < k * 3; ++i) floor /= p;
        if (SigmaP(f4, p, k) < floor) failures.push_back(std::to_string(p));
        ++checked;
      }
    }
    return checked;
  });

  c.Property("hensel_good_primes", [&](auto& failures) {
    std::int64_t checked = 0;
    for (Integer p : {2, 5, 7, 11, 13}) {
      if (SigmaPPrimitive(d6, p, 1) != SigmaPPrimitive(d6, p, 2)) failures.push_back(std::to_string(p));
      // the vertex lifts to pⁿ residues instead of p^{n−1}
      Rational const pp(p);
      Rational const vertex = 1 / (pp * pp * pp * pp) - 1 / (pp * pp * pp * pp * pp);
      if (SigmaP(d6, p, 2) - SigmaP(d6, p, 1) != vertex) failures.push_back("vertex " + std::to_string(p));
      ++checked;
    }
    return checked;
  });

  {
    std::ostringstream detail;
    for (int k = 1; k <= 3; ++k) detail << (k > 1 ? ", " : "") << "k=" << k << ": " << ToString(SigmaPPrimitive(d6, 3, k));
    c.Record("bad_prime_levels", 3, "primitive σ₃ " + detail.str());
  }

  c.Property("unimodular_invariance", [&](auto& failures) {
    std::int64_t checked = 0;
    for (int trial = 0; trial < 3; ++trial) {
      // upper unitriangular times a permutation
      std::vector<IntVector> u(4, IntVector(4, 0));
      for (int i = 0; i < 4; ++i) {
        u[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
        for (int j = i + 1; j < 4; ++j) u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Uniform(rng, -2, 2);
      }
      std::shuffle(u.begin(), u.end(), rng);
      Form const g = ComposeLinear(f4, u);
      for (Integer p : {2, 3, 5, 7}) {
        if (SigmaP(f4, p, 1) != SigmaP(g, p, 1)) failures.push_back(std::to_string(p));
        ++checked;
      }
    }
    return checked;
  });

  c.Property("product_definition", [&](auto& failures) {
    SigmaInfOptions sample;
    sample.max_points_per_shift = 1 << 12;
    DensityEstimate const e = LeadingConstant(d6, 13, 0.05, sample);
    double product = e.sigma_inf.value;
    for (auto const& [p, s] : e.sigma_p) product *= ToDouble(s);
    if (std::fabs(product - e.product) > 1e-12 * std::fabs(product)) failures.push_back("mismatch");
    return std::int64_t{1};
  });
}

}  // namespace

SuiteReport RunSuite(std::string_view suite, VerifyOptions const& options) {
  SuiteReport report;
  auto run = [&](std::string_view name) {
    if (name == "lattices") {
      LatticeSuite(options, report);
    } else if (name == "theta") {
      ThetaSuite(options, report);
    } else if (name == "freeness") {
      FreenessSuite(options, report);
    } else if (name == "circle") {
      CircleSuite(options, report);
    } else if (name == "densities") {
      DensitySuite(options, report);
    } else {
      throw DomainError("unknown suite '" + std::string(name) + "'");
    }
  };
  if (suite == "all") {
    for (auto name : kSuiteNames) run(name);
  } else {
    run(suite);
  }
  return report;
}

}  // namespace freepoints

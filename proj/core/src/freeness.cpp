#include "freepoints/freeness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace freepoints {

namespace {

constexpr long kMaxExponentDenominator = 10'000;
constexpr double kExponentMatch = 1e-12;
constexpr double kTieWindow = 1e-12;

Rational Power(Rational const& base, unsigned long e) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

// Convergent p/q of x with q ≤ kMaxExponentDenominator within kExponentMatch.
bool SmallRational(double x, long& p, long& q) {
  Rational remaining = ToRational(x);
  mpz_class h = 1, h_prev = 0;  // h₋₁, h₋₂
  mpz_class k = 0, k_prev = 1;  // k₋₁, k₋₂
  for (int step = 0; step < 64; ++step) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), remaining.get_num_mpz_t(), remaining.get_den_mpz_t());
    mpz_class const h_next = a * h + h_prev;
    mpz_class const k_next = a * k + k_prev;
    if (k_next > kMaxExponentDenominator) return false;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    Rational const approx(h, k);
    if (std::fabs(ToDouble(approx - ToRational(x))) <= kExponentMatch) {
      if (!h.fits_slong_p()) return false;
      p = h.get_si();
      q = k.get_si();
      return true;
    }
    Rational const frac = remaining - Rational(a);
    if (frac == 0) return false;
    remaining = 1 / frac;
  }
  return false;
}

}  // namespace

bool PowerAtMost(Rational const& value, Rational const& base, double exponent) {
  if (value <= 0 || base <= 0) throw DomainError("power comparison needs positive arguments");
  long p = 0;
  long q = 1;
  if (SmallRational(exponent, p, q)) {
    Rational const lhs = Power(value, static_cast<unsigned long>(q));
    if (p >= 0) return lhs <= Power(base, static_cast<unsigned long>(p));
    return lhs * Power(base, static_cast<unsigned long>(-p)) <= 1;
  }
  long double const lhs = std::log(ToLongDouble(value));
  long double const rhs = static_cast<long double>(exponent) * std::log(ToLongDouble(base));
  return lhs <= rhs;
}

Lattice PointLattice(Form const& f, std::span<Integer const> x) {
  f.CheckLength(x);
  if (!IsPrimitive(x)) throw DomainError("point lattice needs a primitive vector");
  IntVector c = Gradient(f, x);
  Integer const g = GcdGradient(f, x);
  for (auto& v : c) v /= g;
  return KernelLattice(c);
}

PointRecord MakePointRecord(Form const& f, std::span<Integer const> x, Budget& budget) {
  f.CheckLength(x);
  if (!IsPrimitive(x)) throw DomainError("freeness needs a primitive vector");
  if (EvalForm(f, x) != 0) throw DomainError("freeness needs f(x) = 0");
  PointRecord record;
  record.x.assign(x.begin(), x.end());
  record.norm_sq = NormSq(x);
  if (record.norm_sq <= 1) throw DomainError("freeness is undefined for ‖x‖ ≤ 1");
  IntVector const grad = Gradient(f, x);
  record.grad_gcd = GcdGradient(f, x);
  Wide grad_sq = 0;
  for (Integer v : grad) grad_sq = WideAdd(grad_sq, WideMul(v, v));
  record.det_sq = ToRational(grad_sq) /
                  Rational(static_cast<long>(record.grad_gcd) * static_cast<long>(record.grad_gcd));
  MinimaProfile const minima = SuccessiveMinima(PointLattice(f, x), budget);
  record.minima_sq = minima.minima_sq;
  long double const log_n = std::log(static_cast<long double>(record.norm_sq));
  long double const log_s = std::log(ToLongDouble(record.minima_sq.back()));
  record.freeness = static_cast<double>((log_n - log_s) / log_n);
  return record;
}

double FreenessTilde(Form const& f, std::span<Integer const> x, Budget& budget) {
  return MakePointRecord(f, x, budget).freeness;
}

double FreenessTilde(Form const& f, std::span<Integer const> x) {
  Budget budget;
  return FreenessTilde(f, x, budget);
}

bool IsFree(PointRecord const& record, double epsilon) {
  return PowerAtMost(record.minima_sq.back(), Rational(static_cast<long>(record.norm_sq)),
                     1 - epsilon);
}

bool IsFreeByValue(PointRecord const& record, double epsilon) {
  if (std::fabs(record.freeness - epsilon) < kTieWindow) return IsFree(record, epsilon);
  return record.freeness >= epsilon;
}

Lattice TangentQuotient(Form const& f, std::span<Integer const> x) {
  Lattice const lattice = PointLattice(f, x);
  return QuotientModVector(lattice, ToRationalVector(x));
}

SurveyResult FreenessSurvey(Form const& f, SurveyConfig const& config) {
  if (!(config.bound >= 2)) throw DomainError("survey needs B ≥ 2");
  EnumerationPlan plan;
  plan.box_bound = config.bound;
  plan.method = config.method;
  plan.budget = config.budget;
  EnumerationResult const points = EnumeratePoints(f, plan);
  if (!points.complete) throw BudgetExceeded("survey enumeration ran out of budget");

  int const n = f.n_vars();
  SurveyResult survey;
  survey.n_vars = n;
  survey.degree = f.degree();
  survey.bound = config.bound;
  survey.epsilon = config.epsilon;
  survey.reference = static_cast<double>(n - f.degree()) / (n - 1);
  survey.n_total = static_cast<std::int64_t>(points.points.size());

  Budget budget(config.budget);
  std::vector<double> values;
  for (auto const& x : points.points) {
    if (NormSq(x) <= 1) {
      survey.excluded.push_back(x);
      continue;
    }
    PointRecord record = MakePointRecord(f, x, budget);
    if (IsFree(record, config.epsilon)) {
      ++survey.n_free;
    } else {
      ++survey.n_skew;
    }
    auto const bin = static_cast<int>(std::floor(record.freeness / kHistogramWidth));
    ++survey.histogram[bin];
    values.push_back(record.freeness);

    if (config.tangent_check && n >= 3) {
      MinimaProfile const quotient = SuccessiveMinima(TangentQuotient(f, x), budget);
      long double const lhs = std::log(ToLongDouble(quotient.minima_sq.back()));
      long double const rhs = std::log(ToLongDouble(record.minima_sq.back())) -
                              std::log(static_cast<long double>(record.norm_sq)) +
                              2 * std::log(static_cast<long double>(n));
      ++survey.tangent_checked;
      if (lhs > rhs + 1e-12L) survey.tangent_violations.push_back(x);
    }
    survey.records.push_back(std::move(record));
  }
  survey.budget_used = points.budget_used + budget.used();

  if (!values.empty()) {
    double sum = 0;
    for (double v : values) sum += v;
    survey.mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    std::size_t const mid = values.size() / 2;
    survey.median = values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2;
  }
  return survey;
}

std::string SurveyCsv(SurveyResult const& survey) {
  std::ostringstream out;
  out << "x,norm_sq,grad_gcd,det_sq";
  for (int k = 1; k < survey.n_vars; ++k) out << ",s" << k << "_sq";
  out << ",freeness\n";
  for (auto const& r : survey.records) {
    out << JoinColon(r.x) << ',' << r.norm_sq << ',' << r.grad_gcd << ','
        << ToString(r.det_sq);
    for (auto const& s : r.minima_sq) out << ',' << ToString(s);
    out << ',' << FormatDouble(r.freeness) << '\n';
  }
  return out.str();
}

}  // namespace freepoints

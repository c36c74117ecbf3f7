#include "freepoints/forms.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

namespace freepoints {

namespace {

Integer Factorial(int k) {
  Integer r = 1;
  for (int i = 2; i <= k; ++i) r = CheckedMul(r, i);
  return r;
}

Wide WidePow(Integer base, int exponent) {
  Wide r = 1;
  for (int i = 0; i < exponent; ++i) r = WideMul(r, base);
  return r;
}

using Polynomial = std::map<std::vector<int>, Integer>;

Polynomial Multiply(Polynomial const& a, Polynomial const& b) {
  Polynomial out;
  for (auto const& [ea, ca] : a) {
    for (auto const& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      auto& slot = out[e];
      slot = CheckedAdd(slot, CheckedMul(ca, cb));
    }
  }
  std::erase_if(out, [](auto const& kv) { return kv.second == 0; });
  return out;
}

}  // namespace

Form::Form(int n_vars, std::vector<Monomial> monomials,
           std::optional<mpz_class> discriminant_abs)
    : n_vars_(n_vars), degree_(0), discriminant_abs_(std::move(discriminant_abs)) {
  if (n_vars < 1) throw DomainError("a form needs at least one variable");
  std::map<std::vector<int>, Integer> merged;
  for (auto const& m : monomials) {
    if (static_cast<int>(m.exponents.size()) != n_vars) {
      throw DimensionMismatch("monomial has " + std::to_string(m.exponents.size()) +
                              " exponents, expected " + std::to_string(n_vars));
    }
    for (int e : m.exponents) {
      if (e < 0) throw DomainError("negative exponent");
    }
    auto& slot = merged[m.exponents];
    slot = CheckedAdd(slot, m.coefficient);
  }
  for (auto const& [e, c] : merged) {
    if (c == 0) continue;
    int const deg = std::accumulate(e.begin(), e.end(), 0);
    if (monomials_.empty()) {
      degree_ = deg;
    } else if (deg != degree_) {
      throw DomainError("form is not homogeneous: degrees " + std::to_string(degree_) +
                        " and " + std::to_string(deg));
    }
    monomials_.push_back({c, e});
  }
  if (monomials_.empty()) throw DomainError("the zero polynomial is not a form");
  if (degree_ < 3) {
    throw DomainError("forms of degree " + std::to_string(degree_) +
                      " are not supported (need d >= 3)");
  }
  if (discriminant_abs_ && *discriminant_abs_ <= 0) {
    throw DomainError("discriminant must be a positive integer");
  }

  Integer const d_factorial = Factorial(degree_);
  multilinear_terms_.resize(n_vars_);
  for (auto const& m : monomials_) {
    std::vector<int> tuple;
    Integer exponent_factorials = 1;
    for (int i = 0; i < n_vars_; ++i) {
      tuple.insert(tuple.end(), m.exponents[i], i);
      exponent_factorials = CheckedMul(exponent_factorials, Factorial(m.exponents[i]));
    }
    Integer const weight = CheckedMul(m.coefficient, exponent_factorials);
    symmetric_[tuple] = Rational(static_cast<long>(weight)) /
                        Rational(static_cast<long>(d_factorial));
    symmetric_[tuple].canonicalize();
    for (int j = 0; j < n_vars_; ++j) {
      if (m.exponents[j] == 0) continue;
      std::vector<int> rest = tuple;
      rest.erase(std::find(rest.begin(), rest.end(), j));
      multilinear_terms_[j].push_back({weight, std::move(rest)});
    }
  }
}

Form Form::Diagonal(std::vector<Integer> const& coefficients, int degree) {
  int const n = static_cast<int>(coefficients.size());
  std::vector<Monomial> monomials;
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = degree;
    monomials.push_back({coefficients[i], e});
  }
  return Form(n, std::move(monomials));
}

Form Form::Parse(std::istream& in) {
  std::vector<Monomial> monomials;
  int n = -1;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    auto const first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<long long> values;
    std::string token;
    while (fields >> token) {
      std::size_t consumed = 0;
      long long v = 0;
      try {
        v = std::stoll(token, &consumed);
      } catch (std::exception const&) {
        consumed = 0;
      }
      if (consumed != token.size()) {
        throw DomainError("line " + std::to_string(line_number) +
                          ": non-integer field '" + token + "'");
      }
      values.push_back(v);
    }
    if (values.size() < 2) {
      throw DomainError("line " + std::to_string(line_number) +
                        ": expected a coefficient followed by exponents");
    }
    int const fields_n = static_cast<int>(values.size()) - 1;
    if (n == -1) n = fields_n;
    if (fields_n != n) {
      throw DimensionMismatch("line " + std::to_string(line_number) + ": " +
                              std::to_string(fields_n) + " exponents, expected " +
                              std::to_string(n));
    }
    Monomial m{values[0], {}};
    for (int i = 1; i <= n; ++i) m.exponents.push_back(static_cast<int>(values[i]));
    monomials.push_back(std::move(m));
  }
  if (n == -1) throw DomainError("polynomial file contains no monomials");
  return Form(n, std::move(monomials));
}

Form Form::Load(std::filesystem::path const& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open polynomial file " + path.string());
  return Parse(in);
}

Form Form::WithDiscriminant(mpz_class discriminant_abs) const {
  Form copy = *this;
  if (discriminant_abs <= 0) throw DomainError("discriminant must be a positive integer");
  copy.discriminant_abs_ = std::move(discriminant_abs);
  return copy;
}

std::optional<std::vector<Integer>> Form::diagonal_coefficients() const {
  std::vector<Integer> coefficients(n_vars_, 0);
  for (auto const& m : monomials_) {
    auto const it = std::find(m.exponents.begin(), m.exponents.end(), degree_);
    if (it == m.exponents.end()) return std::nullopt;
    coefficients[it - m.exponents.begin()] = m.coefficient;
  }
  return coefficients;
}

double Form::EvaluateReal(std::span<double const> x) const {
  if (static_cast<int>(x.size()) != n_vars_) {
    throw DimensionMismatch("point has wrong dimension");
  }
  double sum = 0;
  for (auto const& m : monomials_) {
    double term = static_cast<double>(m.coefficient);
    for (int i = 0; i < n_vars_; ++i) {
      for (int k = 0; k < m.exponents[i]; ++k) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

std::string Form::ToText() const {
  std::ostringstream out;
  for (auto const& m : monomials_) {
    out << m.coefficient;
    for (int e : m.exponents) out << ' ' << e;
    out << '\n';
  }
  return out.str();
}

void Form::CheckLength(std::span<Integer const> x) const {
  if (static_cast<int>(x.size()) != n_vars_) {
    throw DimensionMismatch("vector of length " + std::to_string(x.size()) +
                            " for a form in " + std::to_string(n_vars_) + " variables");
  }
}

Integer EvalForm(Form const& f, std::span<Integer const> x) {
  f.CheckLength(x);
  Wide sum = 0;
  for (auto const& m : f.monomials_) {
    Wide term = m.coefficient;
    for (int i = 0; i < f.n_vars_; ++i) {
      if (m.exponents[i]) term = WideMul(term, WidePow(x[i], m.exponents[i]));
    }
    sum = WideAdd(sum, term);
  }
  return Narrow(sum);
}

IntVector Gradient(Form const& f, std::span<Integer const> x) {
  f.CheckLength(x);
  std::vector<Wide> grad(f.n_vars_, 0);
  for (auto const& m : f.monomials_) {
    for (int j = 0; j < f.n_vars_; ++j) {
      if (m.exponents[j] == 0) continue;
      Wide term = WideMul(m.coefficient, m.exponents[j]);
      for (int i = 0; i < f.n_vars_; ++i) {
        int const e = m.exponents[i] - (i == j ? 1 : 0);
        if (e) term = WideMul(term, WidePow(x[i], e));
      }
      grad[j] = WideAdd(grad[j], term);
    }
  }
  IntVector out(f.n_vars_);
  for (int j = 0; j < f.n_vars_; ++j) out[j] = Narrow(grad[j]);
  return out;
}

Integer Multilinear(Form const& f, int j, std::span<IntVector const> args) {
  if (j < 0 || j >= f.n_vars_) throw DomainError("multilinear index out of range");
  if (static_cast<int>(args.size()) != f.degree_ - 1) {
    throw DimensionMismatch("m_j takes d-1 = " + std::to_string(f.degree_ - 1) +
                            " vector arguments");
  }
  for (auto const& u : args) f.CheckLength(u);
  Wide total = 0;
  for (auto const& term : f.multilinear_terms_[j]) {
    std::vector<int> order = term.rest;  // sorted; enumerate distinct orderings
    Wide inner = 0;
    do {
      Wide product = 1;
      for (std::size_t i = 0; i < order.size(); ++i) {
        product = WideMul(product, args[i][order[i]]);
        if (product == 0) break;
      }
      inner = WideAdd(inner, product);
    } while (std::next_permutation(order.begin(), order.end()));
    total = WideAdd(total, WideMul(term.weight, inner));
  }
  return Narrow(total);
}

Integer GcdGradient(Form const& f, std::span<Integer const> x) {
  f.CheckLength(x);
  if (std::all_of(x.begin(), x.end(), [](Integer v) { return v == 0; })) {
    throw DomainError("gcd of the gradient is undefined at the origin");
  }
  IntVector const g = Gradient(f, x);
  Integer const h = Gcd(g);
  if (h == 0) {
    throw SingularPoint("gradient vanishes at " + JoinColon(x) +
                        ": the form is singular there");
  }
  return h;
}

mpz_class DiagonalDiscriminant(std::vector<Integer> const& coefficients, int degree) {
  int const n = static_cast<int>(coefficients.size());
  if (degree < 2 || n < 1) throw DomainError("diagonal discriminant needs d >= 2, n >= 1");
  mpz_class dm1_pow_n, dm1_pow_nm1;
  mpz_ui_pow_ui(dm1_pow_n.get_mpz_t(), degree - 1, n);
  mpz_ui_pow_ui(dm1_pow_nm1.get_mpz_t(), degree - 1, n - 1);
  mpz_class const sign_term = (n % 2 == 0) ? 1 : -1;
  mpz_class const removed = (dm1_pow_n - sign_term) / degree;

  mpz_class result = 1;
  for (Integer a : coefficients) {
    if (a == 0) throw DomainError("diagonal form with a zero coefficient is singular");
    mpz_class base = mpz_class(static_cast<long>(degree)) * static_cast<long>(a);
    base = abs(base);
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), dm1_pow_nm1.get_ui());
    result *= power;
  }
  mpz_class divisor;
  mpz_pow_ui(divisor.get_mpz_t(), mpz_class(degree).get_mpz_t(), removed.get_ui());
  if (result % divisor != 0) throw DomainError("discriminant normalisation is not integral");
  return result / divisor;
}

Form ComposeLinear(Form const& f, std::vector<IntVector> const& u) {
  int const n = f.n_vars();
  if (static_cast<int>(u.size()) != n) throw DimensionMismatch("substitution matrix size");
  std::vector<Polynomial> linear(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(u[i].size()) != n) throw DimensionMismatch("substitution row size");
    for (int j = 0; j < n; ++j) {
      if (u[i][j] == 0) continue;
      std::vector<int> e(n, 0);
      e[j] = 1;
      linear[i][e] = u[i][j];
    }
  }
  Polynomial total;
  for (auto const& m : f.monomials()) {
    Polynomial term{{std::vector<int>(n, 0), m.coefficient}};
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < m.exponents[i]; ++k) term = Multiply(term, linear[i]);
    }
    for (auto const& [e, c] : term) {
      auto& slot = total[e];
      slot = CheckedAdd(slot, c);
    }
  }
  std::vector<Monomial> monomials;
  for (auto const& [e, c] : total) {
    if (c != 0) monomials.push_back({c, e});
  }
  return Form(n, std::move(monomials), f.discriminant_abs());
}

}  // namespace freepoints

#include "freepoints/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>

namespace freepoints {

Integer CheckedAdd(Integer a, Integer b) {
  Integer r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow("int64 addition overflow");
  return r;
}

Integer CheckedMul(Integer a, Integer b) {
  Integer r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw Overflow("int64 multiplication overflow");
  }
  return r;
}

Integer Narrow(Wide w) {
  if (w > std::numeric_limits<Integer>::max() ||
      w < std::numeric_limits<Integer>::min()) {
    throw Overflow("value does not fit in int64");
  }
  return static_cast<Integer>(w);
}

Wide WideAdd(Wide a, Wide b) {
  Wide r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow("int128 addition overflow");
  return r;
}

Wide WideMul(Wide a, Wide b) {
  Wide r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw Overflow("int128 multiplication overflow");
  }
  return r;
}

Integer Gcd(Integer a, Integer b) {
  return std::gcd(a, b);
}

Integer Gcd(std::span<Integer const> v) {
  Integer g = 0;
  for (Integer x : v) g = std::gcd(g, x);
  return g;
}

bool IsPrimitive(std::span<Integer const> v) {
  return Gcd(v) == 1;
}

bool IsNormalized(std::span<Integer const> v) {
  for (Integer x : v) {
    if (x != 0) return x > 0;
  }
  return false;
}

Integer Dot(std::span<Integer const> a, std::span<Integer const> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product of unequal lengths");
  Wide s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s = WideAdd(s, static_cast<Wide>(a[i]) * b[i]);
  }
  return Narrow(s);
}

Integer NormSq(std::span<Integer const> v) {
  return Dot(v, v);
}

int Moebius(Integer k) {
  if (k <= 0) throw DomainError("Moebius function of a non-positive integer");
  int sign = 1;
  for (Integer p = 2; p * p <= k; ++p) {
    if (k % p != 0) continue;
    k /= p;
    if (k % p == 0) return 0;
    sign = -sign;
  }
  if (k > 1) sign = -sign;
  return sign;
}

Integer EulerPhi(Integer k) {
  if (k <= 0) throw DomainError("Euler phi of a non-positive integer");
  Integer result = k;
  for (Integer p = 2; p * p <= k; ++p) {
    if (k % p != 0) continue;
    while (k % p == 0) k /= p;
    result -= result / p;
  }
  if (k > 1) result -= result / k;
  return result;
}

bool IsPrime(Integer p) {
  if (p < 2) return false;
  for (Integer d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

std::vector<Integer> PrimesUpTo(Integer bound) {
  std::vector<Integer> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (Integer p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (Integer m = p * p; m <= bound; m += p) composite[m] = true;
  }
  return primes;
}

namespace {

mpz_class MpzFromWide(Wide w) {
  bool const negative = w < 0;
  unsigned __int128 u = negative ? -static_cast<unsigned __int128>(w)
                                 : static_cast<unsigned __int128>(w);
  auto const hi = static_cast<std::uint64_t>(u >> 64);
  auto const lo = static_cast<std::uint64_t>(u);
  mpz_class z = hi;
  z <<= 64;
  mpz_class low;
  mpz_import(low.get_mpz_t(), 1, 1, sizeof(lo), 0, 0, &lo);
  z += low;
  if (negative) z = -z;
  return z;
}

}  // namespace

Rational ToRational(Wide w) {
  return Rational(MpzFromWide(w));
}

Rational ToRational(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value has no rational form");
  Rational q(x);  // mpq_set_d is exact
  q.canonicalize();
  return q;
}

Wide ToWide(mpz_class const& z) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > 126) {
    throw Overflow("integer does not fit in 126 bits");
  }
  mpz_class a = abs(z);
  std::uint64_t words[2] = {0, 0};
  std::size_t count = 0;
  mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, a.get_mpz_t());
  unsigned __int128 u = (static_cast<unsigned __int128>(words[1]) << 64) | words[0];
  Wide w = static_cast<Wide>(u);
  return sgn(z) < 0 ? -w : w;
}

RationalVector ToRationalVector(std::span<Integer const> v) {
  RationalVector out;
  out.reserve(v.size());
  for (Integer x : v) out.emplace_back(static_cast<long>(x));
  return out;
}

std::string ToString(Rational const& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string ToString(Wide w) {
  return MpzFromWide(w).get_str();
}

std::string FormatDouble(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

std::string JoinColon(std::span<Integer const> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ':';
    s += std::to_string(v[i]);
  }
  return s;
}

namespace {

long double MpzToLongDouble(mpz_class const& z) {
  long exponent = 0;
  double const mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::ldexp(static_cast<long double>(mantissa), static_cast<int>(exponent));
}

}  // namespace

double ToDouble(Rational const& q) {
  return static_cast<double>(ToLongDouble(q));
}

long double ToLongDouble(Rational const& q) {
  return MpzToLongDouble(q.get_num()) / MpzToLongDouble(q.get_den());
}

long double ToLongDouble(Wide w) {
  return static_cast<long double>(w);
}

Rational Determinant(RationalMatrix m) {
  std::size_t const n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t row = col + 1; row < n; ++row) {
      if (m[row][col] == 0) continue;
      Rational const factor = m[row][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[row][j] -= factor * m[col][j];
    }
  }
  return det;
}

RationalMatrix Inverse(RationalMatrix m) {
  std::size_t const n = m.size();
  RationalMatrix inv(n, RationalVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) throw DomainError("singular matrix");
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    Rational const p = m[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col] == 0) continue;
      Rational const factor = m[row][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[row][j] -= factor * m[col][j];
        inv[row][j] -= factor * inv[col][j];
      }
    }
  }
  return inv;
}

RationalMatrix Multiply(RationalMatrix const& a, RationalMatrix const& b) {
  if (a.empty()) return {};
  std::size_t const inner = b.size();
  if (a[0].size() != inner) throw DimensionMismatch("matrix product shapes");
  std::size_t const cols = inner ? b[0].size() : 0;
  RationalMatrix out(a.size(), RationalVector(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

RationalMatrix Transpose(RationalMatrix const& a) {
  if (a.empty()) return {};
  RationalMatrix out(a[0].size(), RationalVector(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  }
  return out;
}

}  // namespace freepoints

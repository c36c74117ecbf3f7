#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "freepoints/errors.hpp"

namespace freepoints {

// Coordinates, gradients and form values.  All arithmetic on these is
// overflow-checked and throws `Overflow` rather than wrapping.
using Integer = std::int64_t;
using IntVector = std::vector<Integer>;

// Intermediate width for Gram matrices and exact squared norms.
using Wide = __int128;

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

Integer CheckedAdd(Integer a, Integer b);
Integer CheckedMul(Integer a, Integer b);
Integer Narrow(Wide w);

Wide WideAdd(Wide a, Wide b);
Wide WideMul(Wide a, Wide b);

// gcd of the absolute values; gcd of an all-zero vector is 0.
Integer Gcd(Integer a, Integer b);
Integer Gcd(std::span<Integer const> v);

bool IsPrimitive(std::span<Integer const> v);
// First non-zero coordinate is positive.
bool IsNormalized(std::span<Integer const> v);

Integer Dot(std::span<Integer const> a, std::span<Integer const> b);
Integer NormSq(std::span<Integer const> v);

int Moebius(Integer k);
Integer EulerPhi(Integer k);
bool IsPrime(Integer p);
std::vector<Integer> PrimesUpTo(Integer bound);

Rational ToRational(Wide w);
// Exact conversion (every finite double is a dyadic rational).
Rational ToRational(double x);
Wide ToWide(mpz_class const& z);

RationalVector ToRationalVector(std::span<Integer const> v);

// "num/den", or "num" when the denominator is 1.
std::string ToString(Rational const& q);
std::string ToString(Wide w);
// Round-trip formatting with 17 significant digits.
std::string FormatDouble(double x);
// Coordinates joined by ':'.
std::string JoinColon(std::span<Integer const> v);

double ToDouble(Rational const& q);
long double ToLongDouble(Rational const& q);
long double ToLongDouble(Wide w);

// Dense exact linear algebra on row-major matrices.
using RationalMatrix = std::vector<RationalVector>;

Rational Determinant(RationalMatrix m);
// Throws `DomainError` for a singular matrix.
RationalMatrix Inverse(RationalMatrix m);
RationalMatrix Multiply(RationalMatrix const& a, RationalMatrix const& b);
RationalMatrix Transpose(RationalMatrix const& a);

}  // namespace freepoints

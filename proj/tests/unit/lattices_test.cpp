#include <gtest/gtest.h>

#include "freepoints/errors.hpp"
#include "freepoints/lattices.hpp"
#include "support.hpp"

namespace freepoints {
namespace {

std::vector<Rational> AsRationals(std::vector<Integer> const& v) {
  std::vector<Rational> out;
  for (Integer x : v) out.emplace_back(x);
  return out;
}

// Π ‖b*_i‖² from a Gram–Schmidt pass over the ambient vectors.
Rational GramSchmidtVolumeSq(std::vector<IntVector> const& basis) {
  std::vector<RationalVector> star;
  Rational volume = 1;
  for (auto const& b : basis) {
    RationalVector v = ToRationalVector(b);
    for (auto const& s : star) {
      Rational num = 0;
      Rational den = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        num += v[i] * s[i];
        den += s[i] * s[i];
      }
      Rational const mu = num / den;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= mu * s[i];
    }
    Rational n = 0;
    for (auto const& c : v) n += c * c;
    volume *= n;
    star.push_back(v);
  }
  return volume;
}

TEST(Lattices, KernelExamples) {
  Lattice const k34 = KernelLattice(IntVector{3, 4});
  EXPECT_EQ(k34.rank(), 1);
  EXPECT_EQ(DeterminantSq(k34), 25);
  EXPECT_TRUE(k34.Contains(ToRationalVector(IntVector{4, -3})));

  Lattice const k100 = KernelLattice(IntVector{1, 0, 0});
  EXPECT_EQ(k100.rank(), 2);
  EXPECT_EQ(DeterminantSq(k100), 1);
  EXPECT_EQ(SuccessiveMinima(k100).minima_sq, AsRationals({1, 1}));

  Lattice const k111 = KernelLattice(IntVector{1, 1, 1});
  EXPECT_EQ(DeterminantSq(k111), 3);
  EXPECT_EQ(SuccessiveMinima(k111).minima_sq, AsRationals({2, 2}));
}

TEST(Lattices, KernelDeterminantIsNormOfNormal) {
  testing::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    int const n = static_cast<int>(testing::Uniform(rng, 2, 6));
    IntVector const c = testing::RandomPrimitive(rng, n, 20);
    Lattice const k = KernelLattice(c);
    EXPECT_EQ(k.rank(), n - 1);
    EXPECT_EQ(DeterminantSq(k), NormSq(c)) << JoinColon(c);
  }
}

TEST(Lattices, KernelOfOneOneFourFour) {
  Lattice const k = KernelLattice(IntVector{1, 1, 4, 4});
  std::vector<IntVector> basis;
  for (auto const& row : k.basis()) {
    IntVector v;
    for (auto const& q : row) v.push_back(q.get_num().get_si());
    basis.push_back(v);
  }
  std::vector<Integer> const oracle = testing::BruteForceMinimaSq(basis);
  EXPECT_EQ(SuccessiveMinima(k).minima_sq, AsRationals(oracle));
  EXPECT_EQ(oracle[0], 2);
  EXPECT_EQ(oracle[1], 2);
}

TEST(Lattices, DeterminantExamples) {
  EXPECT_EQ(DeterminantSq(Lattice::Standard(3)), 1);
  EXPECT_EQ(DeterminantSq(Lattice::FromIntegers({{2, 0}, {0, 2}})), 16);
}

TEST(Lattices, DeterminantMatchesGramSchmidtOracle) {
  testing::Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    int const r = static_cast<int>(testing::Uniform(rng, 1, 4));
    int const n = static_cast<int>(testing::Uniform(rng, r, 5));
    std::vector<IntVector> basis;
    for (int i = 0; i < r; ++i) basis.push_back(testing::RandomVector(rng, n, 9));
    if (testing::RankOf(basis) < r) continue;
    EXPECT_EQ(DeterminantSq(Lattice::FromIntegers(basis)), GramSchmidtVolumeSq(basis));
  }
}

TEST(Lattices, MinimaExamples) {
  EXPECT_EQ(SuccessiveMinima(Lattice::Standard(4)).minima_sq, AsRationals({1, 1, 1, 1}));
  EXPECT_EQ(SuccessiveMinima(Lattice::FromIntegers({{1, 0}, {0, 5}})).minima_sq,
            AsRationals({1, 25}));
}

TEST(Lattices, MinimaMatchBruteForce) {
  testing::Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    int const r = static_cast<int>(testing::Uniform(rng, 1, 3));
    auto const basis = testing::RandomBasis(rng, r, 5);
    MinimaProfile const profile = SuccessiveMinima(Lattice::FromIntegers(basis));
    EXPECT_EQ(profile.minima_sq, AsRationals(testing::BruteForceMinimaSq(basis)));
    Lattice const lattice = Lattice::FromIntegers(basis);
    for (std::size_t k = 0; k < profile.witnesses.size(); ++k) {
      EXPECT_TRUE(lattice.Contains(profile.witnesses[k]));
      EXPECT_EQ(lattice.NormSq(profile.witnesses[k]), profile.minima_sq[k]);
    }
  }
}

TEST(Lattices, MinimaInvariantUnderReduction) {
  // a skewed basis of Z²
  Lattice const skew = Lattice::FromIntegers({{1, 0}, {1000, 1}});
  EXPECT_EQ(SuccessiveMinima(skew).minima_sq, AsRationals({1, 1}));
  EXPECT_TRUE(SameLattice(skew, skew.Reduced()));
}

TEST(Lattices, DualExamples) {
  Lattice const dual = Dual(Lattice::FromIntegers({{2, 0}, {0, 2}}));
  EXPECT_EQ(DeterminantSq(dual), Rational(1, 16));
  EXPECT_TRUE(dual.Contains({Rational(1, 2), Rational(0)}));
  EXPECT_TRUE(SameLattice(Dual(Lattice::Standard(3)), Lattice::Standard(3)));
}

TEST(Lattices, DualDeterminantAndTransference) {
  testing::Rng rng(24);
  for (int trial = 0; trial < 60; ++trial) {
    int const r = static_cast<int>(testing::Uniform(rng, 1, 3));
    auto const basis = testing::RandomBasis(rng, r, 6);
    Lattice const lattice = Lattice::FromIntegers(basis);
    Lattice const dual = Dual(lattice);
    EXPECT_EQ(DeterminantSq(lattice) * DeterminantSq(dual), 1);
    auto const s = SuccessiveMinima(lattice).minima_sq;
    auto const t = SuccessiveMinima(dual).minima_sq;
    for (int k = 0; k < r; ++k) {
      Rational const product = s[static_cast<std::size_t>(k)] * t[static_cast<std::size_t>(r - 1 - k)];
      EXPECT_GE(product, 1);
      EXPECT_LE(product, r * r);
    }
  }
}

TEST(Lattices, QuotientExamples) {
  Lattice const z2 = Lattice::Standard(2);
  Lattice const q10 = QuotientModVector(z2, ToRationalVector(IntVector{1, 0}));
  EXPECT_EQ(q10.rank(), 1);
  EXPECT_EQ(SuccessiveMinima(q10).minima_sq, AsRationals({1}));

  // projection of (1,0) off (3,4) has length 4/5; the shortest class has
  // length 1/5 and the metric scale 1/25 brings it to 1/25
  Lattice const q34 = QuotientModVector(z2, ToRationalVector(IntVector{3, 4}));
  EXPECT_EQ(SuccessiveMinima(q34).minima_sq.front(), Rational(1, 625));
  EXPECT_EQ(DeterminantSq(q34), Rational(1, 625));

  EXPECT_THROW(QuotientModVector(z2, ToRationalVector(IntVector{2, 0})), DomainError);
}

TEST(Lattices, QuotientMinimaBound) {
  testing::Rng rng(25);
  for (int trial = 0; trial < 60; ++trial) {
    IntVector const c = testing::RandomPrimitive(rng, 4, 6);
    Lattice const lattice = KernelLattice(c);
    MinimaProfile const profile = SuccessiveMinima(lattice);
    RationalVector const x = profile.witnesses.front();
    Rational const x_sq = lattice.NormSq(x);
    Lattice const quotient = QuotientModVector(lattice, x);
    auto const q = SuccessiveMinima(quotient).minima_sq;
    for (std::size_t k = 0; k < q.size(); ++k) {
      EXPECT_LE(q[k] * x_sq, profile.minima_sq[k + 1]);
    }
    // det² = det²(Λ)/‖x‖² · (1/‖x‖²)^{rank − 1}, rank 3 here
    EXPECT_EQ(DeterminantSq(quotient) * x_sq * x_sq * x_sq, DeterminantSq(lattice));
  }
}

TEST(Lattices, ScalingMultipliesMinima) {
  Lattice const lattice = Lattice::FromIntegers({{2, 1}, {1, 3}});
  Rational const lambda(3, 2);
  auto const base = SuccessiveMinima(lattice).minima_sq;
  auto const scaled = SuccessiveMinima(lattice.Scaled(lambda)).minima_sq;
  for (std::size_t k = 0; k < base.size(); ++k) EXPECT_EQ(scaled[k], lambda * lambda * base[k]);
}

TEST(Lattices, CountLatticePoints) {
  Budget budget;
  EXPECT_EQ(CountLatticePoints(Lattice::Standard(2), 1, budget), 5);
  EXPECT_EQ(CountLatticePoints(Lattice::Standard(2), 2, budget), 9);
  EXPECT_EQ(CountLatticePoints(Lattice::FromIntegers({{1, 0}, {0, 5}}), 25, budget), 13);
}

TEST(Lattices, ParseLiteral) {
  Lattice const a = Lattice::Parse("1 0; 0 5");
  EXPECT_TRUE(SameLattice(a, Lattice::FromIntegers({{1, 0}, {0, 5}})));
  Lattice const b = Lattice::Parse("1/2, 0; 0, 1");
  EXPECT_EQ(DeterminantSq(b), Rational(1, 4));
  EXPECT_TRUE(SameLattice(Lattice::Parse("1/2,0|0,1"), b));
}

TEST(Lattices, UnitBallVolume) {
  EXPECT_NEAR(UnitBallVolume(1), 2.0, 1e-15);
  EXPECT_NEAR(UnitBallVolume(2), M_PI, 1e-14);
  EXPECT_NEAR(UnitBallVolume(3), 4 * M_PI / 3, 1e-14);
}

}  // namespace
}  // namespace freepoints

#include <gtest/gtest.h>

#include <cmath>

#include "freepoints/theta.hpp"
#include "support.hpp"

namespace freepoints {
namespace {

constexpr double kTol = 1e-10;

double SeriesZ(double scale, double radius) {
  double sum = 0;
  for (int k = -60; k <= 60; ++k) {
    double const y = scale * k;
    sum += std::exp(-M_PI * y * y / (radius * radius));
  }
  return sum;
}

// Direct sum over an ambient box, for integral lattices in Z².
double BoxTheta(std::vector<IntVector> const& basis, double radius, Integer box) {
  Lattice const lattice = Lattice::FromIntegers(basis);
  double sum = 0;
  testing::ForEachInBox(2, box, [&](IntVector const& y) {
    if (!lattice.Contains(ToRationalVector(y))) return;
    sum += std::exp(-M_PI * static_cast<double>(NormSq(y)) / (radius * radius));
  });
  return sum;
}

TEST(Theta, IntegersAtOne) {
  ThetaValue const v = ThetaSum(Lattice::Standard(1), 1.0);
  EXPECT_LE(v.tail_bound, kTol);
  EXPECT_NEAR(v.value, SeriesZ(1, 1), v.tail_bound + 1e-15);
  EXPECT_NEAR(SeriesZ(1, 1), 1.0864348112133080, 1e-15);
}

TEST(Theta, ProductStructure) {
  double const one = SeriesZ(1, 1.7);
  EXPECT_NEAR(ThetaSum(Lattice::Standard(3), 1.7).value, one * one * one, 1e-9);
  EXPECT_NEAR(ThetaSum(Lattice::FromIntegers({{1, 0}, {0, 5}}), 2.0).value,
              SeriesZ(1, 2) * SeriesZ(5, 2), 1e-10);
}

TEST(Theta, MatchesBoxSum) {
  testing::Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto const basis = testing::RandomBasis(rng, 2, 4);
    double const radius = 0.5 + static_cast<double>(testing::Uniform(rng, 0, 20)) / 10;
    // exp(−π·30²/R²) is far below tol for R ≤ 2.5
    EXPECT_NEAR(ThetaSum(Lattice::FromIntegers(basis), radius).value, BoxTheta(basis, radius, 30),
                2 * kTol);
  }
}

TEST(Theta, AtLeastOne) {
  testing::Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    int const r = static_cast<int>(testing::Uniform(rng, 1, 4));
    Lattice const lattice = Lattice::FromIntegers(testing::RandomBasis(rng, r, 8));
    EXPECT_GE(ThetaSum(lattice, 0.3).value, 1.0);
  }
}

TEST(Theta, PoissonExamples) {
  Budget budget;
  EXPECT_LE(PoissonResidual(Lattice::Standard(1), 1.0, kTol, budget), 4 * kTol);
  Lattice const two = Lattice::FromIntegers({{2}});
  EXPECT_LE(PoissonResidual(two, 1.0, kTol, budget), 4 * kTol);
  // θ_{2Z}(1) = (1/2)·θ_{Z/2}(1)
  EXPECT_NEAR(ThetaSum(two, 1.0).value, 0.5 * SeriesZ(0.5, 1.0), 1e-12);
}

TEST(Theta, PoissonResidualRandomRankThree) {
  testing::Rng rng(33);
  Budget budget;
  for (int trial = 0; trial < 30; ++trial) {
    Lattice const lattice = Lattice::FromIntegers(testing::RandomBasis(rng, 3, 6));
    for (double radius : {0.5, 1.0, 2.0}) {
      EXPECT_LE(PoissonResidual(lattice, radius, kTol, budget), 4 * kTol);
    }
  }
}

TEST(Theta, MajorantExamples) {
  Lattice const z2 = Lattice::Standard(2);
  EXPECT_FALSE(SkewIndicator(z2, 2.0));
  EXPECT_GE(SkewMajorant(z2, 2.0), 0.0);
  EXPECT_TRUE(SkewIndicator(z2, 0.5));
  EXPECT_GE(SkewMajorant(z2, 0.5), 1.0);
  Lattice const thin = Lattice::FromIntegers({{1, 0}, {0, 100}});
  EXPECT_TRUE(SkewIndicator(thin, 10.0));
  EXPECT_GE(SkewMajorant(thin, 10.0), 1.0);
}

TEST(Theta, MajorantDominatesIndicator) {
  testing::Rng rng(34);
  for (int trial = 0; trial < 60; ++trial) {
    int const r = static_cast<int>(testing::Uniform(rng, 1, 4));
    Lattice const lattice = Lattice::FromIntegers(testing::RandomBasis(rng, r, 10));
    double const det = std::sqrt(ToDouble(DeterminantSq(lattice)));
    for (double f : {0.25, 0.5, 1.0, 2.0}) {
      double const radius = f * std::pow(det, 1.0 / r);
      double const indicator = SkewIndicator(lattice, radius) ? 1.0 : 0.0;
      EXPECT_GE(SkewMajorant(lattice, radius), indicator);
    }
  }
}

TEST(Theta, TailBoundIsCertified) {
  Lattice const lattice = Lattice::FromIntegers({{3, 1}, {1, 2}});
  double const exact = BoxTheta({{3, 1}, {1, 2}}, 3.0, 40);
  ThetaValue const v = ThetaSum(lattice, 3.0, 1e-6);
  EXPECT_LE(exact - v.value, v.tail_bound + 1e-12);
  EXPECT_GE(exact - v.value, -1e-12);
}

}  // namespace
}  // namespace freepoints

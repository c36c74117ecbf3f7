#include <gtest/gtest.h>

#include <cmath>

#include "freepoints/enumerate.hpp"
#include "freepoints/freeness.hpp"
#include "support.hpp"

namespace freepoints {
namespace {

using testing::Fermat4;

std::vector<IntVector> IntegerBasis(Lattice const& lattice) {
  std::vector<IntVector> basis;
  for (auto const& row : lattice.basis()) {
    IntVector v;
    for (auto const& q : row) v.push_back(q.get_num().get_si());
    basis.push_back(v);
  }
  return basis;
}

TEST(Freeness, PointLatticeExamples) {
  Lattice const a = PointLattice(Fermat4(), IntVector{1, -1, 2, -2});
  EXPECT_EQ(a.rank(), 3);
  EXPECT_EQ(DeterminantSq(a), 34);
  EXPECT_TRUE(a.Contains(ToRationalVector(IntVector{1, -1, 2, -2})));

  Lattice const b = PointLattice(Fermat4(), IntVector{1, -1, 0, 0});
  EXPECT_EQ(DeterminantSq(b), 2);
  for (IntVector const& v : {IntVector{0, 0, 1, 0}, IntVector{0, 0, 0, 1}, IntVector{1, -1, 0, 0}}) {
    EXPECT_TRUE(b.Contains(ToRationalVector(v)));
  }
}

TEST(Freeness, PointBelongsToItsLattice) {
  EnumerationPlan plan;
  plan.box_bound = 12;
  for (auto const& x : EnumeratePoints(Fermat4(), plan).points) {
    EXPECT_TRUE(PointLattice(Fermat4(), x).Contains(ToRationalVector(x))) << JoinColon(x);
  }
}

TEST(Freeness, TildeAgainstBruteForceMinima) {
  IntVector const x{1, -1, 2, -2};
  auto const oracle = testing::BruteForceMinimaSq(IntegerBasis(PointLattice(Fermat4(), x)));
  double const expected =
      (0.5 * std::log(10.0) - 0.5 * std::log(static_cast<double>(oracle.back()))) /
      (0.5 * std::log(10.0));
  EXPECT_NEAR(FreenessTilde(Fermat4(), x), expected, 1e-12);
}

TEST(Freeness, LinePointsBecomeSkew) {
  // (p, −p, q, −q): s₁ = s₂ = √2 stay fixed while s₃ grows like ‖x‖²
  double previous = 1;
  for (Integer t = 2; t <= 40; t += 3) {
    IntVector const x{1, -1, t, -t};
    double const value = FreenessTilde(Fermat4(), x);
    EXPECT_LT(value, previous + 1e-12);
    previous = value;
    Budget budget;
    PointRecord const record = MakePointRecord(Fermat4(), x, budget);
    EXPECT_EQ(record.minima_sq[0], 2);
    EXPECT_EQ(record.minima_sq[1], 2);
  }
  EXPECT_LT(previous, 0);
}

TEST(Freeness, ExactAndFloatingTestsAgree) {
  EnumerationPlan plan;
  plan.box_bound = 15;
  Budget budget;
  for (auto const& x : EnumeratePoints(Fermat4(), plan).points) {
    if (NormSq(x) <= 1) continue;
    PointRecord const record = MakePointRecord(Fermat4(), x, budget);
    for (double eps : {-0.5, 0.0, 0.1, 1.0 / 3, 0.5}) {
      EXPECT_EQ(IsFree(record, eps), IsFreeByValue(record, eps)) << JoinColon(x) << " ε=" << eps;
    }
  }
}

TEST(Freeness, ThresholdTieCountsAsFree) {
  // Z³ kernel record with s₃² = ‖x‖² exactly at ε = 0
  PointRecord record;
  record.x = {1, -1, 0, 0};
  record.norm_sq = 2;
  record.minima_sq = {1, 1, 2};
  record.freeness = 0;
  EXPECT_TRUE(IsFree(record, 0.0));
  EXPECT_TRUE(IsFreeByValue(record, 0.0));
}

TEST(Freeness, SurveyPartitionsAndMedian) {
  SurveyConfig config;
  config.bound = 12;
  config.epsilon = 0.1;
  SurveyResult const s = FreenessSurvey(Fermat4(), config);
  EXPECT_EQ(s.n_free + s.n_skew, static_cast<std::int64_t>(s.records.size()));
  EXPECT_EQ(s.n_total, static_cast<std::int64_t>(s.records.size() + s.excluded.size()));
  EXPECT_EQ(s.n_total, CountNV(Fermat4(), 12));
  std::int64_t histogram_total = 0;
  for (auto const& [bin, count] : s.histogram) histogram_total += count;
  EXPECT_EQ(histogram_total, static_cast<std::int64_t>(s.records.size()));
  std::vector<double> values;
  for (auto const& r : s.records) values.push_back(r.freeness);
  std::sort(values.begin(), values.end());
  std::size_t const m = values.size() / 2;
  double const median = values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
  EXPECT_NEAR(s.median, median, 1e-12);
  EXPECT_NEAR(s.reference, 1.0 / 3, 1e-15);
}

TEST(Freeness, SurveyCsvIsDeterministic) {
  SurveyConfig config;
  config.bound = 8;
  EXPECT_EQ(SurveyCsv(FreenessSurvey(Fermat4(), config)),
            SurveyCsv(FreenessSurvey(Fermat4(), config)));
}

TEST(Freeness, TangentQuotientRankAndBound) {
  for (IntVector const& x : {IntVector{1, -1, 0, 0}, IntVector{3, 4, 5, -6}}) {
    Lattice const lattice = PointLattice(Fermat4(), x);
    Lattice const quotient = TangentQuotient(Fermat4(), x);
    EXPECT_EQ(quotient.rank(), 2);
    Rational const x_sq(NormSq(x));
    // det(Λ_x)/‖x‖ · (1/‖x‖)^{rank}
    EXPECT_EQ(DeterminantSq(quotient) * x_sq * x_sq * x_sq, DeterminantSq(lattice));
    auto const q = SuccessiveMinima(quotient).minima_sq;
    auto const s = SuccessiveMinima(lattice).minima_sq;
    for (std::size_t k = 0; k < q.size(); ++k) EXPECT_LE(q[k] * x_sq, s[k + 1]);
  }
}

}  // namespace
}  // namespace freepoints

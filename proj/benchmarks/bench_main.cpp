#include <benchmark/benchmark.h>

#include <random>

#include "freepoints/circle.hpp"
#include "freepoints/densities.hpp"
#include "freepoints/enumerate.hpp"
#include "freepoints/freeness.hpp"
#include "freepoints/lattices.hpp"
#include "freepoints/theta.hpp"

namespace freepoints {
namespace {

Lattice RandomFullRank(std::mt19937_64& rng, int r) {
  std::uniform_int_distribution<Integer> entry(-20, 20);
  for (;;) {
    std::vector<IntVector> basis(static_cast<std::size_t>(r), IntVector(static_cast<std::size_t>(r)));
    for (auto& row : basis) {
      for (auto& v : row) v = entry(rng);
    }
    Lattice lattice = Lattice::FromIntegers(basis);
    if (Determinant(lattice.gram()) != 0) return lattice;
  }
}

void BM_SuccessiveMinima(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<Lattice> corpus;
  for (int i = 0; i < 32; ++i) corpus.push_back(RandomFullRank(rng, static_cast<int>(state.range(0))));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SuccessiveMinima(corpus[i++ % corpus.size()]));
  }
}
BENCHMARK(BM_SuccessiveMinima)->DenseRange(2, 6);

void BM_EnumerateDiagonal6(benchmark::State& state) {
  Form const f = Form::Diagonal({1, 1, 1, 1, 1, 1}, 3);
  EnumerationPlan plan;
  plan.box_bound = static_cast<double>(state.range(1));
  plan.method = state.range(0) ? EnumerationPlan::Method::kMeetInTheMiddle : EnumerationPlan::Method::kNaive;
  for (auto _ : state) benchmark::DoNotOptimize(EnumeratePoints(f, plan));
  state.SetLabel(state.range(0) ? "mitm" : "naive");
}
BENCHMARK(BM_EnumerateDiagonal6)->Args({0, 6})->Args({1, 6})->Args({0, 10})->Args({1, 10})->Args({1, 20})
    ->Unit(benchmark::kMillisecond);

void BM_ThetaSum(benchmark::State& state) {
  std::mt19937_64 rng(2);
  Lattice const lattice = RandomFullRank(rng, static_cast<int>(state.range(0)));
  double const radius = std::pow(ToDouble(DeterminantSq(lattice)), 0.5 / lattice.rank());
  for (auto _ : state) benchmark::DoNotOptimize(ThetaSum(lattice, radius));
}
BENCHMARK(BM_ThetaSum)->DenseRange(1, 4);

void BM_PointRecord(benchmark::State& state) {
  Form const f = Form::Diagonal({1, 1, 1, 1, 1, 1}, 3);
  IntVector const x{1, 2, 3, -1, -2, -3};
  for (auto _ : state) {
    Budget budget;
    benchmark::DoNotOptimize(MakePointRecord(f, x, budget));
  }
}
BENCHMARK(BM_PointRecord);

void BM_SBeta(benchmark::State& state) {
  Form const f = Form::Diagonal({1, 1, 1, 1}, 3);
  IntVector const x{1, -1, 2, -2};
  double const y = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(SBeta(f, x, 1.0 / 3 + 1e-4, y));
}
BENCHMARK(BM_SBeta)->Arg(10)->Arg(100);

void BM_SigmaP(benchmark::State& state) {
  Form const f = Form::Diagonal({1, 1, 1, 1, 1, 1}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(SigmaP(f, state.range(0), 2));
}
BENCHMARK(BM_SigmaP)->Arg(3)->Arg(13)->Arg(47);

}  // namespace
}  // namespace freepoints

BENCHMARK_MAIN();

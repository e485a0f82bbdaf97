#include <benchmark/benchmark.h>

#include <random>

#include "schwarz/harness/experiment.hpp"
#include "schwarz/linalg/eigen.hpp"
#include "schwarz/linalg/factorization.hpp"

using namespace schwarz;

namespace {

ExperimentConfig config(Index J, Index cells, CoarseKind coarse) {
  ExperimentConfig c;
  c.J = J;
  c.cells_per_subdomain = cells;
  c.overlap = 2;
  c.coarse = coarse;
  return c;
}

DenseMatrix random_spd(Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> d;
  DenseMatrix b(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) b(i, j) = d(gen);
  DenseMatrix a = matmul(b, b, Op::transpose);
  for (Index i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);
  return a;
}

}  // namespace

static void BM_Spmv(benchmark::State& state) {
  const auto p = build_problem(config(4, state.range(0), CoarseKind::none));
  Vector x(static_cast<std::size_t>(p.a->nrows()), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(spmv(*p.a, x));
  state.SetItemsProcessed(state.iterations() * p.a->nnz());
}
BENCHMARK(BM_Spmv)->Arg(20)->Arg(40);

static void BM_Icc0(benchmark::State& state) {
  const auto p = build_problem(config(1, state.range(0), CoarseKind::none));
  for (auto _ : state) benchmark::DoNotOptimize(icc0(*p.a));
}
BENCHMARK(BM_Icc0)->Arg(20)->Arg(40);

static void BM_GevpTop(benchmark::State& state) {
  const Index n = state.range(0);
  const auto g = random_spd(n, 1);
  const auto c = random_spd(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(gevp_hpd(g, c, EigRange::largest(5)));
}
BENCHMARK(BM_GevpTop)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_OneLevelApply(benchmark::State& state) {
  const auto p = build_problem(config(9, state.range(0), CoarseKind::none));
  Vector r(static_cast<std::size_t>(p.a->nrows()), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(p.solvers->apply(r));
}
BENCHMARK(BM_OneLevelApply)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

static void BM_TwoLevelApply(benchmark::State& state) {
  const auto p = build_problem(config(9, state.range(0), CoarseKind::extended));
  Vector r(static_cast<std::size_t>(p.a->nrows()), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(p.preconditioner->apply(r));
}
BENCHMARK(BM_TwoLevelApply)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

static void BM_ExtendedSetup(benchmark::State& state) {
  const auto c = config(4, state.range(0), CoarseKind::extended);
  for (auto _ : state) benchmark::DoNotOptimize(build_problem(c));
}
BENCHMARK(BM_ExtendedSetup)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_GmresTwoLevel(benchmark::State& state) {
  const auto p = build_problem(config(9, 16, CoarseKind::extended));
  const auto m = p.preconditioner_map();
  for (auto _ : state) benchmark::DoNotOptimize(gmres(*p.a, p.f, m));
}
BENCHMARK(BM_GmresTwoLevel)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

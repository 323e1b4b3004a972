#include <benchmark/benchmark.h>

#include <random>

#include "perimere/barcode.hpp"
#include "perimere/generators.hpp"
#include "perimere/lattice.hpp"
#include "perimere/mergetree.hpp"
#include "perimere/transport.hpp"

using namespace perimere;

static void BM_BuildTorusGrid(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto g = make_torus_grid({side, side, side}, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_merge_tree(g));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.edge_count()));
}
BENCHMARK(BM_BuildTorusGrid)->Arg(16)->Arg(32)->Arg(47)->Unit(benchmark::kMillisecond);

static void BM_Barcode(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto t = build_merge_tree(make_torus_grid({side, side, side}, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract(t));
  }
}
BENCHMARK(BM_Barcode)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_HnfReduce(benchmark::State& state) {
  const auto cols = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> entry(-9, 9);
  std::vector<std::vector<std::int64_t>> c(cols, std::vector<std::int64_t>(3));
  for (auto& col : c) {
    for (auto& x : col) {
      x = entry(rng);
    }
  }
  const IntMatrix m = IntMatrix::from_columns(3, c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hnf_reduce(m));
  }
}
BENCHMARK(BM_HnfReduce)->Arg(2)->Arg(4)->Arg(6);

static void BM_W1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  MultiplicityFunction xi;
  MultiplicityFunction eta;
  for (int i = 0; i < n; ++i) {
    const double a = coord(rng);
    const double b = coord(rng);
    xi.add(a, a + coord(rng), 1.0 + i % 3);
    eta.add(b, b + coord(rng), 1.0 + i % 2);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(w1(xi, eta));
  }
}
BENCHMARK(BM_W1)->Arg(10)->Arg(50)->Arg(200);

BENCHMARK_MAIN();

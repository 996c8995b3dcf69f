#include <benchmark/benchmark.h>

#include "vcantor/vcantor.hpp"

using namespace vcantor;

namespace {

VTree tree_of(const Catalog& c, std::size_t V, std::size_t depth) {
  Xoshiro256ss rng(derive_stream_seed(7, 0));
  return build_tree(c, V, depth, std::nullopt, rng);
}

}  // namespace

static void BM_BuildTree(benchmark::State& state) {
  const auto c = catalogs::cantor_and_fifths();
  const auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tree_of(c, 3, depth).node_count());
}
BENCHMARK(BM_BuildTree)->Arg(6)->Arg(9)->Arg(12);

static void BM_InertiaCount(benchmark::State& state) {
  const auto tree = tree_of(catalogs::cantor(), 1, static_cast<std::size_t>(state.range(0)));
  const auto p = assemble(decompose(tree, tree.depth()), Boundary::Dirichlet);
  double x = 1e3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inertia_count(p, x));
    x *= 1.0001;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.dimension()));
}
BENCHMARK(BM_InertiaCount)->Arg(8)->Arg(12)->Arg(16);

static void BM_CountingFunction(benchmark::State& state) {
  const auto tree = tree_of(catalogs::cantor(), 1, 14);
  const auto p = assemble(decompose(tree, 14), Boundary::Dirichlet);
  const auto xs = geometric_grid(1e2, 1e8, 64);
  const auto threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(counting_function(p, xs, threads));
}
BENCHMARK(BM_CountingFunction)->Arg(1)->Arg(4)->UseRealTime();

static void BM_MonteCarloF(benchmark::State& state) {
  const NeckBlockSample sample(catalogs::cantor_and_fifths(), 2, static_cast<std::size_t>(state.range(0)),
                               derive_stream_seed(2024, 1));
  for (auto _ : state) benchmark::DoNotOptimize(sample.f(0.4).value);
}
BENCHMARK(BM_MonteCarloF)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();

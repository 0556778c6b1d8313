#include <benchmark/benchmark.h>

#include "dpar/coloring.hpp"
#include "dpar/matchmis.hpp"
#include "dpar/rounding.hpp"
#include "dpar/work.hpp"
#include "dpar_tools/generators.hpp"

using namespace dpar;

namespace {

Graph gnm(std::int64_t n) {
  tools::GraphSpec s;
  s.n = static_cast<std::uint64_t>(n);
  s.m = 8 * s.n;
  s.seed = 7;
  return tools::generate_graph(s);
}

template <class F>
void run_counted(benchmark::State& state, const Graph& g, F&& f) {
  WorkCounter wc;
  for (auto _ : state) {
    wc.clear();
    WorkScope scope(wc);
    f();
  }
  state.counters["work_per_size"] = double(wc.total()) / double(g.num_nodes() + g.num_edges());
  state.SetItemsProcessed(state.iterations() * std::int64_t(g.num_nodes() + g.num_edges()));
}

void BM_DeterministicMIS(benchmark::State& state) {
  const Graph g = gnm(state.range(0));
  run_counted(state, g, [&] { benchmark::DoNotOptimize(maximal_independent_set(g)); });
}

void BM_LubyMIS(benchmark::State& state) {
  const Graph g = gnm(state.range(0));
  run_counted(state, g, [&] { benchmark::DoNotOptimize(luby_mis_baseline(g, 1)); });
}

void BM_DeterministicMatching(benchmark::State& state) {
  const Graph g = gnm(state.range(0));
  run_counted(state, g, [&] { benchmark::DoNotOptimize(maximal_matching(g)); });
}

void BM_DefectiveColoring(benchmark::State& state) {
  const Graph g = gnm(state.range(0));
  run_counted(state, g, [&] { benchmark::DoNotOptimize(defective_coloring(g, 0.1)); });
}

void BM_MaxCut(benchmark::State& state) {
  const Graph g = gnm(state.range(0));
  run_counted(state, g, [&] { benchmark::DoNotOptimize(max_cut_half(g, 0.1)); });
}

void BM_HittingSet(benchmark::State& state) {
  tools::HittingSpec s;
  s.num_u = static_cast<std::uint64_t>(state.range(0));
  s.num_v = 8 * s.num_u;
  const BipartiteInstance h = tools::generate_hitting_instance(s);
  WorkCounter wc;
  for (auto _ : state) {
    wc.clear();
    WorkScope scope(wc);
    benchmark::DoNotOptimize(hitting_set(h));
  }
  state.counters["work_per_size"] = double(wc.total()) / double(h.num_u + h.num_v + h.num_edges());
  state.SetItemsProcessed(state.iterations() * std::int64_t(h.num_edges()));
}

}  // namespace

BENCHMARK(BM_DeterministicMIS)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LubyMIS)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeterministicMatching)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DefectiveColoring)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaxCut)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HittingSet)->RangeMultiplier(4)->Range(64, 1 << 10)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

// Throughput benchmarks for the enumeration kernels. Built against
// google-benchmark when available; otherwise a minimal chrono harness runs
// the same bodies (fixed iteration counts, median-of-5).
#include <chrono>
#include <cstdint>
#include <iostream>

#include "midlayer/cluster.hpp"
#include "midlayer/oracle.hpp"

using namespace midlayer;

namespace {

struct Case {
  const char* name;
  double (*run)();  // returns items/s
  const char* unit;
};

double bench_sweep_plain() {
  LayerGraph g(5, 3);
  auto t0 = std::chrono::steady_clock::now();
  const int reps = 2000;
  uint64_t sink = 0;
  for (int i = 0; i < reps; i++) sink += sweep_all_subsets(g, Side::upper, 1).total();
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (sink == 0) std::abort();
  return reps * 1024.0 / s;  // states/s
}

double bench_sweep_restricted() {
  LayerGraph g(5, 3);
  auto t0 = std::chrono::steady_clock::now();
  const int reps = 1000;
  uint64_t sink = 0;
  for (int i = 0; i < reps; i++) sink += sweep_restricted(g, Side::upper, 1).total();
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (sink == 0) std::abort();
  return reps * 1024.0 / s;
}

double bench_clusters_d4() {
  LayerGraph g(7, 4);
  auto t0 = std::chrono::steady_clock::now();
  const int reps = 3;
  for (int i = 0; i < reps; i++) {
    Rat l4 = expansion_term(g, Side::upper, Rat(1), 4);
    if (l4.is_zero()) std::abort();
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return reps / s;  // full L4 evaluations/s
}

double bench_ursell() {
  auto t0 = std::chrono::steady_clock::now();
  const int reps = 200;
  int64_t sink = 0;
  for (int i = 0; i < reps; i++)
    for (int m = 1; m <= 6; m++) sink += ursell_signed_count(IncompatGraph::complete(m));
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (sink == 0) std::abort();
  return reps * 6.0 / s;
}

}  // namespace

#ifdef MIDLAYER_HAVE_GBENCH
#include <benchmark/benchmark.h>

static void BM_SweepPlain(benchmark::State& state) {
  LayerGraph g(5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sweep_all_subsets(g, Side::upper, 1).total());
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_SweepPlain);

static void BM_SweepRestricted(benchmark::State& state) {
  LayerGraph g(5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sweep_restricted(g, Side::upper, 1).total());
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_SweepRestricted);

static void BM_ClusterL4_d4(benchmark::State& state) {
  LayerGraph g(7, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(expansion_term(g, Side::upper, Rat(1), 4).to_double());
}
BENCHMARK(BM_ClusterL4_d4);

static void BM_Ursell6(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(ursell_signed_count(IncompatGraph::complete(6)));
}
BENCHMARK(BM_Ursell6);

BENCHMARK_MAIN();
#else

int main() {
  const Case cases[] = {
      {"sweep_plain_d3", bench_sweep_plain, "states/s"},
      {"sweep_restricted_d3", bench_sweep_restricted, "states/s"},
      {"cluster_L4_d4", bench_clusters_d4, "evals/s"},
      {"ursell_complete_graphs", bench_ursell, "graphs/s"},
  };
  for (const auto& c : cases) {
    double best = 0;
    for (int rep = 0; rep < 3; rep++) best = std::max(best, c.run());
    std::cout << c.name << ": " << best << " " << c.unit << "\n";
  }
  return 0;
}
#endif

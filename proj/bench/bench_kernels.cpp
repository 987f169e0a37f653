// Serial reference vs OpenMP paths. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wit/dataset/dataset.hpp"
#include "wit/numcore/kernels.hpp"

namespace {

using wit::num::kernels::Trans;

struct Operands {
  std::vector<double> a, b, c;
  explicit Operands(std::size_t n) : a(n * n), b(n * n), c(n * n) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& x : a) x = u(rng);
    for (double& x : b) x = u(rng);
  }
};

void BM_GemmSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Operands op(n);
  for (auto _ : state) {
    wit::num::kernels::gemm_serial(Trans::kNo, Trans::kYes, n, n, n, op.a.data(), op.b.data(), op.c.data(), false);
    benchmark::DoNotOptimize(op.c.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n * n));
}

void BM_GemmParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Operands op(n);
  for (auto _ : state) {
    wit::num::kernels::gemm_parallel(Trans::kNo, Trans::kYes, n, n, n, op.a.data(), op.b.data(), op.c.data(), false);
    benchmark::DoNotOptimize(op.c.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n * n));
}

wit::data::ScenarioConfig bench_scenario() {
  wit::data::ScenarioConfig c;
  c.layout.num_tx = 100;
  c.snapshots = 4;
  c.array_mx = 2;
  c.array_mz = 4;
  c.grid.stride = 32;
  return c;
}

void BM_GenerateSerial(benchmark::State& state) {
  const auto cfg = bench_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(wit::data::generate(cfg, 1, wit::data::Exec::kSerial));
}

void BM_GenerateParallel(benchmark::State& state) {
  const auto cfg = bench_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(wit::data::generate(cfg, 1, wit::data::Exec::kParallel));
}

}  // namespace

BENCHMARK(BM_GemmSerial)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_GemmParallel)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_GenerateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

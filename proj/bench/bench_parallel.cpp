// Serial reference vs OpenMP kernels: dataset generation and batch RC solves.
#include <benchmark/benchmark.h>

#include "robench/generator.hpp"
#include "robench/reformulate.hpp"

using namespace robench;

namespace {

GenConfig config(std::size_t count) {
  GenConfig cfg;
  cfg.seed = 17;
  cfg.count = count;
  return cfg;
}

const std::vector<RobustInstance>& instances() {
  static const auto data = [] {
    auto cfg = config(512);
    cfg.render = false;
    return generate_dataset(cfg);
  }();
  return data;
}

void BM_GenerateSerial(benchmark::State& state) {
  const auto cfg = config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generate_dataset_serial(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GenerateParallel(benchmark::State& state) {
  const auto cfg = config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generate_dataset(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SolveSerial(benchmark::State& state) {
  const std::span<const RobustInstance> batch(instances().data(),
                                              static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_robust_batch_serial(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SolveParallel(benchmark::State& state) {
  const std::span<const RobustInstance> batch(instances().data(),
                                              static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_robust_batch(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_GenerateSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveSerial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveParallel)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

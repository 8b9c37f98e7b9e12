#include <benchmark/benchmark.h>

#include "varcont/probes.hpp"
#include "varcont/solvers.hpp"

using namespace varcont;

namespace {

GridPtr grid_of(benchmark::State& state) {
  return make_grid(3, 20.0, static_cast<int>(state.range(0)), DomainKind::TruncatedWholeSpace);
}

void BM_ApplyOperator(benchmark::State& state) {
  const auto g = grid_of(state);
  SplitMix64 rng(1);
  const auto u = random_smooth_field(g, rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_operator(u, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyOperator)->Arg(500)->Arg(2000)->Arg(8000);

void BM_SolveOperator(benchmark::State& state) {
  const auto g = grid_of(state);
  SplitMix64 rng(2);
  const auto f = random_smooth_field(g, rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_operator(f, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SolveOperator)->Arg(500)->Arg(2000)->Arg(8000);

void BM_Energy(benchmark::State& state) {
  const auto g = grid_of(state);
  const Problem p = Problem::autonomous(g, Nonlinearity::pure_power(3.0));
  SplitMix64 rng(3);
  const auto u = random_positive_field(g, rng);
  for (auto _ : state) benchmark::DoNotOptimize(energy(p, u, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Energy)->Arg(500)->Arg(2000)->Arg(8000);

void BM_Gradient(benchmark::State& state) {
  const auto g = grid_of(state);
  const Problem p = Problem::autonomous(g, Nonlinearity::pure_power(3.0));
  SplitMix64 rng(4);
  const auto u = random_positive_field(g, rng);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(p, u, 1.0));
}
BENCHMARK(BM_Gradient)->Arg(2000);

void BM_MountainPass(benchmark::State& state) {
  const auto g = grid_of(state);
  const Problem p = Problem::autonomous(g, Nonlinearity::pure_power(3.0));
  const MountainPassConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(mountain_pass(p, 1.0, cfg));
}
BENCHMARK(BM_MountainPass)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

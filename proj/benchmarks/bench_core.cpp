#include <benchmark/benchmark.h>

#include <random>

#include "gamet/corpus.hpp"
#include "gamet/kernel.hpp"
#include "gamet/linopt.hpp"
#include "gamet/metric.hpp"
#include "gamet/qmu.hpp"

namespace {

gamet::MatrixGame random_matrix(int rows, int cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  gamet::MatrixGame m = gamet::MatrixGame::of(rows, cols);
  for (auto& v : m.payoff) v = unit(rng);
  return m;
}

void BM_MatrixGameValue3x3(benchmark::State& state) {
  gamet::MatrixGame m = random_matrix(3, 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gamet::matrix_game_value(m));
}
BENCHMARK(BM_MatrixGameValue3x3);

void BM_MatrixGameValue2x4(benchmark::State& state) {
  gamet::MatrixGame m = random_matrix(2, 4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(gamet::matrix_game_value(m));
}
BENCHMARK(BM_MatrixGameValue2x4);

void BM_Transship4(benchmark::State& state) {
  gamet::DirectedMetric d = gamet::DirectedMetric::ones_off_diagonal(4);
  gamet::Distribution p({0.25, 0.25, 0.25, 0.25});
  gamet::Distribution q({0.7, 0.1, 0.1, 0.1});
  for (auto _ : state) benchmark::DoNotOptimize(gamet::transship_distance(p, q, d).value);
}
BENCHMARK(BM_Transship4);

void BM_AprioriStepFig1(benchmark::State& state) {
  gamet::GameStructure g = gamet::builtin_game("fig1").game;
  gamet::DirectedMetric d = gamet::observation_metric(g);
  for (auto _ : state)
    benchmark::DoNotOptimize(gamet::apriori_step(g, d, 1, 0.05).metric.max_entry());
}
BENCHMARK(BM_AprioriStepFig1);

void BM_AposterioriStepFig1(benchmark::State& state) {
  gamet::GameStructure g = gamet::builtin_game("fig1").game;
  gamet::DirectedMetric d = gamet::observation_metric(g);
  for (auto _ : state)
    benchmark::DoNotOptimize(gamet::aposteriori_step(g, d, 1, 0.05).metric.max_entry());
}
BENCHMARK(BM_AposterioriStepFig1);

void BM_EvalReachabilityFig5(benchmark::State& state) {
  gamet::GameStructure g = gamet::builtin_game("fig5").game;
  gamet::Formula f = gamet::parse_formula("mu X. (u_flag | pre1(X))");
  for (auto _ : state) benchmark::DoNotOptimize(gamet::evaluate(g, f).value.v);
}
BENCHMARK(BM_EvalReachabilityFig5);

void BM_GameBisimKernelFig5(benchmark::State& state) {
  gamet::GameStructure g = gamet::builtin_game("fig5").game;
  for (auto _ : state)
    benchmark::DoNotOptimize(gamet::game_bisim_kernel(g, 0.05).partition.block_count());
}
BENCHMARK(BM_GameBisimKernelFig5);

}  // namespace

BENCHMARK_MAIN();

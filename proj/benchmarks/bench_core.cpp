#include <benchmark/benchmark.h>

#include "stve/estimator.hpp"
#include "stve/kalman.hpp"
#include "stve/operators.hpp"
#include "stve/simulator.hpp"
#include "stve/spectral.hpp"

namespace {

stve::RegressionDataset dataset(stve::Index horizon, stve::Index dim) {
  stve::SimulationConfig c;
  c.horizon = horizon;
  c.dim = dim;
  c.sigma2 = 0.5;
  c.eta2 = 2.0;
  c.seed = 42;
  return stve::simulate(c).data;
}

void BM_GramMatrix(benchmark::State& state) {
  const auto d = dataset(state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(stve::gram_matrix(d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GramMatrix)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNSquared);

void BM_Eigendecompose(benchmark::State& state) {
  const Eigen::MatrixXd g = stve::gram_matrix(dataset(state.range(0), 5));
  for (auto _ : state) benchmark::DoNotOptimize(stve::eigendecompose(g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eigendecompose)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNCubed)
    ->Unit(benchmark::kMillisecond);

void BM_EigendecomposeJacobi(benchmark::State& state) {
  const Eigen::MatrixXd g = stve::gram_matrix(dataset(state.range(0), 5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stve::eigendecompose(g, stve::EigenMethod::kCyclicJacobi));
  }
}
BENCHMARK(BM_EigendecomposeJacobi)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Estimate(benchmark::State& state) {
  const auto d = dataset(state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(stve::estimate(d));
}
BENCHMARK(BM_Estimate)->Arg(125)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

// Repeated solves on a fixed design reuse one eigendecomposition.
void BM_PreparedSolve(benchmark::State& state) {
  const auto d = dataset(state.range(0), 5);
  const auto system = stve::PreparedSystem::prepare(d);
  for (auto _ : state) benchmark::DoNotOptimize(system.solve(d.y()));
}
BENCHMARK(BM_PreparedSolve)->Arg(500)->Arg(1000);

void BM_KalmanFilter(benchmark::State& state) {
  const auto d = dataset(state.range(0), state.range(1));
  stve::KalmanConfig c;
  c.sigma2 = 0.5;
  c.eta2 = 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(stve::kalman_filter(d, c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KalmanFilter)->Args({1000, 1})->Args({1000, 5})->Args({1000, 20});

}  // namespace

BENCHMARK_MAIN();

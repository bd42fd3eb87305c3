#include <benchmark/benchmark.h>

#include <random>

#include "porous/adjoint.hpp"
#include "porous/design.hpp"
#include "porous/dissipation.hpp"
#include "test_util.hpp"

using namespace porous;
namespace tu = porous::testutil;

namespace {

void BM_SolveDarcy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  DarcyProblem pb = tu::darcy_channel_class_b(n, n);
  std::mt19937_64 rng(1);
  pb.k = tu::random_smooth_k(pb.grid, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_darcy(pb));
  }
  state.SetLabel(std::to_string(n) + "x" + std::to_string(n));
}
BENCHMARK(BM_SolveDarcy)->Arg(32)->Arg(64)->Arg(128);

void BM_SolveBrinkman(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BrinkmanProblem pb = tu::brinkman_channel_class_b(n, n);
  std::mt19937_64 rng(1);
  pb.k = tu::random_smooth_k(pb.grid, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_brinkman(pb));
  }
  state.SetLabel(std::to_string(n) + "x" + std::to_string(n));
}
BENCHMARK(BM_SolveBrinkman)->Arg(16)->Arg(32)->Arg(64);

void BM_AdjointDarcy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  DarcyProblem pb = tu::darcy_channel_class_b(n, n);
  std::mt19937_64 rng(1);
  pb.k = tu::random_smooth_k(pb.grid, rng);
  const FlowSolution fwd = solve_darcy(pb);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_adjoint_darcy(pb, fwd));
  }
}
BENCHMARK(BM_AdjointDarcy)->Arg(32)->Arg(64);

void BM_DiscreteGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  DarcyProblem pb = tu::darcy_channel_class_b(n, n);
  std::mt19937_64 rng(1);
  pb.k = tu::random_smooth_k(pb.grid, rng);
  const FlowSolution fwd = solve_darcy(pb);
  for (auto _ : state) {
    benchmark::DoNotOptimize(discrete_gradient(pb, fwd));
  }
}
BENCHMARK(BM_DiscreteGradient)->Arg(16)->Arg(32)->Arg(64);

void BM_OptimizeIteration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const AnyProblem pb = tu::darcy_channel_class_b(n, n);
  Scenario sc;
  sc.sense = Scenario::Sense::Maximize;
  sc.bounded_material = Scenario::Bound::HighPermeability;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize(pb, sc, 2, 0.2));
  }
}
BENCHMARK(BM_OptimizeIteration)->Arg(32);

}  // namespace

BENCHMARK_MAIN();

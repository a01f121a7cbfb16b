// Serial vs OpenMP comparison for the two hot kernels: the curve transform
// grid loop and the Monte Carlo attack replay.

#include <benchmark/benchmark.h>

#include "martgap/attacks.hpp"
#include "martgap/curve_family.hpp"
#include "martgap/protocol.hpp"
#include "martgap/simulate.hpp"
#include "martgap/transforms.hpp"

namespace {

using namespace martgap;

void BM_TransformT_Serial(benchmark::State& state) {
  const Curve c1 = seed_curve(SeedKind::C, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::transform_T(c1));
  }
}
BENCHMARK(BM_TransformT_Serial)->Arg(2000)->Arg(10000);

void BM_TransformT_OpenMP(benchmark::State& state) {
  const Curve c1 = seed_curve(SeedKind::C, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(transform_T(c1));
  }
}
BENCHMARK(BM_TransformT_OpenMP)->Arg(2000)->Arg(10000);

void BM_TransformTprime_Serial(benchmark::State& state) {
  const Curve d1 = seed_curve(SeedKind::Cprime, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::transform_Tprime(d1));
  }
}
BENCHMARK(BM_TransformTprime_Serial)->Arg(10000);

void BM_TransformTprime_OpenMP(benchmark::State& state) {
  const Curve d1 = seed_curve(SeedKind::Cprime, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(transform_Tprime(d1));
  }
}
BENCHMARK(BM_TransformTprime_OpenMP)->Arg(10000);

void BM_Simulate_Serial(benchmark::State& state) {
  const NodePtr tree = build_majority(15);
  const StoppingRule up = restart_attack(tree, Direction::Up).strategy;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::simulate_attack(tree, up, SimMode::RestartUp, state.range(0), 42));
  }
}
BENCHMARK(BM_Simulate_Serial)->Arg(100000);

void BM_Simulate_OpenMP(benchmark::State& state) {
  const NodePtr tree = build_majority(15);
  const StoppingRule up = restart_attack(tree, Direction::Up).strategy;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_attack(tree, up, SimMode::RestartUp, state.range(0), 42));
  }
}
BENCHMARK(BM_Simulate_OpenMP)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();

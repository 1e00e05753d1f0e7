#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "rbso/assignment.hpp"
#include "rbso/engine.hpp"
#include "rbso/env.hpp"
#include "rbso/grouping.hpp"
#include "rbso/scenario.hpp"

namespace {

std::vector<rbso::Vec2> random_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  std::vector<rbso::Vec2> pts(n);
  for (auto& p : pts) p = {u(gen), u(gen)};
  return pts;
}

void BM_SolveAssignment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto costs = rbso::build_cost_matrix(random_points(n, 1), random_points(n, 2));
  for (auto _ : state) benchmark::DoNotOptimize(rbso::solve_assignment(costs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveAssignment)->RangeMultiplier(2)->Range(4, 128)->Complexity(benchmark::oNCubed);

void BM_BruteForceAssignment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto costs = rbso::build_cost_matrix(random_points(n, 1), random_points(n, 2));
  for (auto _ : state) benchmark::DoNotOptimize(rbso::brute_force_assignment(costs));
}
BENCHMARK(BM_BruteForceAssignment)->DenseRange(4, 8, 2);

void BM_DianaSplit(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 3);
  rbso::GroupingParams params;
  params.max_groups = static_cast<std::size_t>(state.range(0)) / 4;
  for (auto _ : state) benchmark::DoNotOptimize(rbso::diana_split(pts, params));
}
BENCHMARK(BM_DianaSplit)->RangeMultiplier(2)->Range(20, 320);

void BM_FieldValue(benchmark::State& state) {
  const auto locations = random_points(static_cast<std::size_t>(state.range(0)), 4);
  std::vector<rbso::TargetState> targets;
  for (const auto& p : locations) targets.emplace_back(p);
  const auto probes = random_points(1024, 5);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rbso::field_value(probes[i++ & 1023], targets, 10.0));
}
BENCHMARK(BM_FieldValue)->Arg(10)->Arg(100);

void BM_PublishedRun(benchmark::State& state) {
  const rbso::Scenario scenario = rbso::published_scenario();
  const auto inst = rbso::instantiate(scenario, static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    const auto result = state.range(1) == 0 ? rbso::run(inst.env, inst.params)
                                            : rbso::run_random_walk_baseline(inst.env, inst.params);
    state.counters["ticks"] = static_cast<double>(result.total_steps);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_PublishedRun)->ArgNames({"seed", "baseline"})->Args({1, 0})->Args({1, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

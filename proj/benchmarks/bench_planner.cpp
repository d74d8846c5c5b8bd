// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/collision.hpp"
#include "gsx/eval.hpp"
#include "gsx/local_planner.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace gsx {
namespace {

std::vector<Vec3> query_points(std::size_t n) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<Vec3> points;
  for (std::size_t i = 0; i < n; ++i) points.push_back({u(rng), u(rng), 0.3});
  return points;
}

// Exhaustive check (no broadphase); range(1) is the worker count.
void BM_CollisionFlat(benchmark::State& state) {
  const GaussianMap map = bench_map(static_cast<std::size_t>(state.range(0)), 1);
  const CollisionIndex index(map, PlannerConfig{}.collision(), Broadphase::kNone);
  const std::vector<Vec3> points = query_points(129);
  for (auto _ : state) benchmark::DoNotOptimize(collision_check(points, index, state.range(1)));
}
BENCHMARK(BM_CollisionFlat)->Args({100000, 1})->Args({100000, 0})->Args({1000000, 1})->Args({1000000, 0})
    ->Unit(benchmark::kMillisecond);

void BM_CollisionHashed(benchmark::State& state) {
  const GaussianMap map = bench_map(static_cast<std::size_t>(state.range(0)), 1);
  const CollisionIndex index(map, PlannerConfig{}.collision());
  const std::vector<Vec3> points = query_points(129);
  for (auto _ : state) benchmark::DoNotOptimize(collision_check(points, index));
}
BENCHMARK(BM_CollisionHashed)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMicrosecond);

void BM_Plan(benchmark::State& state) {
  const GaussianMap map = bench_map(static_cast<std::size_t>(state.range(0)), 1);
  const PlannerConfig cfg;
  const std::vector<Vec2> guidance{{5, 0}};
  for (auto _ : state) {
    const CollisionIndex index(map, cfg.collision());
    benchmark::DoNotOptimize(plan(RobotState{}, guidance, index, {}, cfg));
  }
}
BENCHMARK(BM_Plan)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gsx

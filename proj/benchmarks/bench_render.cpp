// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/render.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace gsx {
namespace {

GaussianMap scene(int count) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1), z(1, 6), r(0.02, 0.2), c(0, 1);
  GaussianMap map;
  for (int i = 0; i < count; ++i) {
    Gaussian g;
    g.mean = {2 * u(rng), 2 * u(rng), z(rng)};
    g.radius = r(rng);
    g.opacity = 0.8;
    g.color = {c(rng), c(rng), c(rng)};
    map.add(g);
  }
  return map;
}

Frame target(const CameraIntrinsics& intr) {
  Frame f(intr.width, intr.height);
  std::fill(f.color.begin(), f.color.end(), 0.5);
  std::fill(f.depth.begin(), f.depth.end(), 3.0);
  return f;
}

void BM_Render(benchmark::State& state) {
  const GaussianMap map = scene(static_cast<int>(state.range(0)));
  const CameraIntrinsics intr;
  for (auto _ : state) benchmark::DoNotOptimize(render(map, Pose{}, intr));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Render)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Backward(benchmark::State& state) {
  const GaussianMap map = scene(static_cast<int>(state.range(0)));
  const CameraIntrinsics intr;
  const Frame observed = target(intr);
  for (auto _ : state) benchmark::DoNotOptimize(backward(map, Pose{}, intr, observed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Backward)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gsx

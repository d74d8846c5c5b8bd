// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/config_io.hpp"
#include "gsx/mapper.hpp"
#include "gsx/render.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace gsx {
namespace {

/// Opaque wall of Gaussians at depth z filling the view of a 64x64 camera.
GaussianMap wall(double z, int n = 40) {
  GaussianMap map;
  const double half = 0.75 * z;
  const double step = 2 * half / (n - 1);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Gaussian g;
      g.mean = {-half + i * step, -half + j * step, z};
      g.radius = step;
      g.opacity = 0.95;
      g.color = {0.4, 0.5, 0.6};
      map.add(g);
    }
  }
  return map;
}

Frame full_frame(int w, int h, double depth) {
  Frame f(w, h);
  std::fill(f.color.begin(), f.color.end(), 0.5);
  std::fill(f.depth.begin(), f.depth.end(), depth);
  std::fill(f.alpha.begin(), f.alpha.end(), 1.0);
  return f;
}

TEST(Ledger, NewbornSetRetire) {
  UncertaintyLedger ledger;
  ledger.add_newborn(3, 0);
  EXPECT_TRUE(std::isinf(ledger.at(3).displacement));
  ledger.set(3, 0.25, 4);
  EXPECT_EQ(ledger.at(3).displacement, 0.25);
  EXPECT_EQ(ledger.at(3).last_update, 4u);
  EXPECT_THROW(ledger.set(3, -1.0, 5), std::invalid_argument);
  const std::vector<GaussianId> gone{3};
  ledger.retire(gone);
  EXPECT_FALSE(ledger.contains(3));
  EXPECT_THROW(ledger.at(3), std::out_of_range);
}

TEST(Densify, EmptyMapFullFrame) {
  GaussianMap map;
  UncertaintyLedger ledger;
  const CameraIntrinsics intr;
  const std::size_t added = densify(map, ledger, full_frame(64, 64, 2.0), Pose{}, intr, MapperConfig{}, 0);
  EXPECT_EQ(added, 256u);
  EXPECT_EQ(map.size(), 256u);
  EXPECT_EQ(ledger.size(), 256u);
  for (GaussianId id : map.ids()) EXPECT_TRUE(std::isinf(ledger.at(id).displacement));
  for (const Gaussian& g : map.gaussians()) EXPECT_NEAR(g.mean.z(), 2.0, 1e-12);
}

TEST(Densify, ConvergedFrameAddsNothing) {
  GaussianMap map = wall(2.0);
  UncertaintyLedger ledger;
  for (GaussianId id : map.ids()) ledger.add_newborn(id, 0);
  const CameraIntrinsics intr;
  const Frame observed = render(map, Pose{}, intr);
  // Only faint silhouette pixels (valid depth, alpha below the threshold) can add.
  const MapperConfig cfg;
  std::size_t silhouette = 0;
  for (int y = cfg.densify_stride / 2; y < 64; y += cfg.densify_stride) {
    for (int x = cfg.densify_stride / 2; x < 64; x += cfg.densify_stride) {
      const std::size_t p = observed.pixel(x, y);
      silhouette += observed.depth[p] > 0 && observed.alpha[p] < cfg.densify_alpha_max;
    }
  }
  EXPECT_LT(silhouette, 16u);
  EXPECT_EQ(densify(map, ledger, observed, Pose{}, intr, cfg, 1), silhouette);
}

TEST(Densify, CountMatchesPerPixelRecount) {
  GaussianMap map = wall(3.0);
  UncertaintyLedger ledger;
  for (GaussianId id : map.ids()) ledger.add_newborn(id, 0);
  const CameraIntrinsics intr;
  const Frame rendered = render(map, Pose{}, intr);
  Frame observed = rendered;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 32; ++x) observed.depth[observed.pixel(x, y)] = 1.0;  // new geometry on the left
  }
  const MapperConfig cfg;
  std::size_t expected = 0;
  for (int y = cfg.densify_stride / 2; y < 64; y += cfg.densify_stride) {
    for (int x = cfg.densify_stride / 2; x < 64; x += cfg.densify_stride) {
      const std::size_t p = observed.pixel(x, y);
      if (!(observed.depth[p] > 0)) continue;
      if (rendered.alpha[p] < cfg.densify_alpha_max || !(rendered.depth[p] > 0) ||
          std::abs(rendered.depth[p] - observed.depth[p]) > cfg.densify_depth_err) {
        ++expected;
      }
    }
  }
  EXPECT_GE(expected, 128u);
  EXPECT_EQ(densify(map, ledger, observed, Pose{}, intr, cfg, 1), expected);
}

// One step only: the L1 terms are not differentiable at zero residual, so
// rounding noise in later steps gets amplified into a full sign gradient.
TEST(Optimize, ExactMapStaysPut) {
  GaussianMap map = wall(2.0, 20);
  UncertaintyLedger ledger;
  for (GaussianId id : map.ids()) ledger.set(id, 0.0, 0);
  const CameraIntrinsics intr;
  const Frame target = render(map, Pose{}, intr);
  MapperConfig cfg;
  cfg.iterations_per_frame = 1;
  const double l = optimize(map, target, Pose{}, intr, cfg, ledger, 1);
  EXPECT_NEAR(l, 0.0, 1e-12);
  for (GaussianId id : map.ids()) EXPECT_LT(ledger.at(id).displacement, 1e-12);
}

TEST(Optimize, MisplacedGaussianLossDecreases) {
  const CameraIntrinsics intr;
  GaussianMap target_map;
  Gaussian g;
  g.mean = {0.0, 0.0, 2.0};
  g.radius = 0.3;
  g.opacity = 0.9;
  g.color = {0.8, 0.3, 0.1};
  target_map.add(g);
  const Frame target = render(target_map, Pose{}, intr);

  GaussianMap map;
  g.mean = {0.15, -0.1, 2.1};
  g.color = {0.5, 0.5, 0.5};
  const GaussianId id = map.add(g);
  UncertaintyLedger ledger;
  ledger.add_newborn(id, 0);
  std::vector<double> history;
  const double final_loss = optimize(map, target, Pose{}, intr, MapperConfig{}, ledger, 1, &history);
  ASSERT_EQ(history.size(), 10u);
  // Plain gradient descent may overshoot early; it must still settle well below the start.
  EXPECT_LT(final_loss, 0.6 * history.front());
  EXPECT_LE(final_loss, history.back());
  EXPECT_GT(ledger.at(id).displacement, 0.0);
  EXPECT_TRUE(std::isfinite(ledger.at(id).displacement));
}

TEST(Optimize, OutOfViewGaussianKeepsLedgerEntry) {
  GaussianMap map = wall(2.0, 10);
  Gaussian hidden;
  hidden.mean = {0, 0, -4};
  const GaussianId hid = map.add(hidden);
  UncertaintyLedger ledger;
  for (GaussianId id : map.ids()) ledger.add_newborn(id, 0);
  ledger.set(hid, 0.125, 0);
  const CameraIntrinsics intr;
  optimize(map, full_frame(64, 64, 2.5), Pose{}, intr, MapperConfig{}, ledger, 3);
  EXPECT_EQ(ledger.at(hid).displacement, 0.125);
  EXPECT_EQ(ledger.at(hid).last_update, 0u);
  EXPECT_EQ(map[map.size() - 1].mean, hidden.mean);
}

TEST(Prune, Thresholds) {
  GaussianMap map;
  UncertaintyLedger ledger;
  Gaussian faint, huge, healthy;
  faint.opacity = 0.001;
  huge.radius = 2.0;
  healthy.opacity = 0.9;
  healthy.radius = 0.05;
  for (const Gaussian& g : {faint, huge, healthy}) ledger.add_newborn(map.add(g), 0);
  EXPECT_EQ(prune(map, MapperConfig{}, ledger), 2u);
  ASSERT_EQ(map.size(), 1u);
  EXPECT_EQ(map.ids()[0], 2u);
  EXPECT_EQ(ledger.size(), 1u);
  EXPECT_TRUE(ledger.contains(2));
}

struct SceneFixture {
  Scene scene = load_scene(std::string(GSX_SOURCE_DIR) + "/scenes/convergence200.json");
  SensorModel sensor;
  Pose pose = camera_pose(scene.spawn, 0.5);
  Frame frame = sense(scene, pose, sensor, nullptr);
};

TEST(MapUpdate, FirstFrameAddsGaussians) {
  SceneFixture fx;
  GaussianMap map;
  UncertaintyLedger ledger;
  const UpdateStats s = map_update(map, ledger, fx.frame, fx.pose, fx.sensor.intr, MapperConfig{}, 0);
  EXPECT_GT(s.added, 0u);
  EXPECT_TRUE(std::isfinite(s.loss));
  EXPECT_EQ(s.gaussian_count, map.size());
  EXPECT_EQ(ledger.size(), map.size());
}

TEST(MapUpdate, RepeatedFrameLossDoesNotGrow) {
  SceneFixture fx;
  GaussianMap map;
  UncertaintyLedger ledger;
  std::vector<double> losses;
  for (int i = 0; i < 20; ++i) {
    losses.push_back(map_update(map, ledger, fx.frame, fx.pose, fx.sensor.intr, MapperConfig{}, i).loss);
  }
  for (std::size_t i = 1; i < losses.size(); ++i) EXPECT_LE(losses[i], losses[i - 1] * 1.05) << "cycle " << i;
  EXPECT_LT(losses.back(), losses.front());
}

TEST(MapUpdate, InvalidDepthStillOptimizesColor) {
  SceneFixture fx;
  GaussianMap map;
  UncertaintyLedger ledger;
  map_update(map, ledger, fx.frame, fx.pose, fx.sensor.intr, MapperConfig{}, 0);
  Frame blind = fx.frame;
  std::fill(blind.depth.begin(), blind.depth.end(), kInvalidDepth);
  for (double& c : blind.color) c = 1.0 - c;
  const std::vector<Gaussian> before = map.gaussians();
  const UpdateStats s = map_update(map, ledger, blind, fx.pose, fx.sensor.intr, MapperConfig{}, 1);
  EXPECT_EQ(s.added, 0u);
  bool color_changed = false;
  for (std::size_t i = 0; i < std::min(before.size(), map.size()); ++i) {
    color_changed |= !map[i].color.isApprox(before[i].color);
  }
  EXPECT_TRUE(color_changed);
}

TEST(MapperConfig, Validation) {
  MapperConfig cfg;
  cfg.iterations_per_frame = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.rates.mean = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace gsx

// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// Ground-truth worlds built from Gaussians and the RGBD sensor that observes
// them through the shared renderer.

#pragma once

#include "gsx/local_planner.hpp"
#include "gsx/splat.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace gsx {

enum class SceneKind { kRooms, kCorridor, kClutter };

std::string_view to_string(SceneKind kind);
SceneKind parse_scene_kind(std::string_view name);

struct SceneSpec {
  SceneKind kind = SceneKind::kRooms;
  Vec2 extent = Vec2(12.0, 12.0);  // meters, x by y
  double height = 2.5;             // wall height, meters
  double density = 64.0;           // surface Gaussians per square meter; 0 = empty
  double corridor_width = 3.0;     // meters, corridor kind only
  std::uint64_t seed = 1;
};

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
  bool contains_xy(const Vec2& p, double margin = 0.0) const;
};

/// Ground filter of the ground-truth collision rule. The floor sheet sits at
/// z = 0.
inline constexpr double kSceneGroundZ = 0.05;

/// Robot geometry from the planner with the ground-truth ground filter.
inline CollisionParams scene_collision(const PlannerConfig& cfg) {
  return {cfg.robot_radius, cfg.lambda_g, kSceneGroundZ};
}

struct Scene {
  GaussianMap gt_map;
  Aabb bounds;
  double ground_z = kSceneGroundZ;
  RobotState spawn;
};

/// Deterministic in the spec. Walls, floor and ceiling are sheets of
/// Gaussians spaced no further apart than their radius. The spawn is checked
/// at height robot_z and resampled if it collides.
Scene generate_scene(const SceneSpec& spec, const CollisionParams& collision = {}, double robot_z = 0.3);

/// True when the planar point is free under the gamma rule against the
/// ground-truth map (brute force).
bool gt_is_free(const Scene& scene, const Vec2& p, double z, const CollisionParams& params);

/// Uniform free pose inside the bounds, at least `margin` further from
/// obstacles than the collision rule demands.
RobotState sample_free_state(const Scene& scene, std::mt19937_64& rng, const CollisionParams& params,
                             double robot_z, double margin = 0.0);

struct SensorModel {
  CameraIntrinsics intr;
  double max_range = 5.0;          // meters
  double depth_noise_sigma = 0.0;  // meters

  void validate() const;
};

/// Renders the ground truth, drops depths beyond max_range and adds
/// N(0, sigma^2) to valid depths (clamped to (0, max_range]). rng may be null
/// when sigma is 0.
Frame sense(const Scene& scene, const Pose& pose, const SensorModel& model, std::mt19937_64* rng);

}  // namespace gsx

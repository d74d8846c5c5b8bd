// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// Kinodynamic trajectory generation for a unicycle: A* over a tree of
// constant-control motion primitives with batched collision checks, then
// selection of the most informative of the cheapest candidates.

#pragma once

#include "gsx/collision.hpp"
#include "gsx/splat.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gsx {

struct RobotState {
  Vec2 p = Vec2::Zero();  // meters
  double theta = 0.0;     // radians, (-pi, pi]
};

struct ControlInput {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
};

struct MotionPrimitive {
  ControlInput u;
  double duration = 0.0;  // seconds
  RobotState start;
  RobotState end;
  std::vector<RobotState> samples;  // evenly spaced in time, both endpoints included
  double cost = 0.0;
};

struct PlannerConfig {
  int n_v = 3;
  int n_omega = 5;
  double v_max = 0.6;      // m/s
  double omega_max = 0.9;  // rad/s
  double dt = 1.0;         // seconds per primitive
  double lambda_t = 1.0;   // time weight
  double horizon = 5.0;    // meters, local planning range
  int n_traj = 10;         // candidates kept for information scoring
  int info_segments = 0;   // 0 = one per primitive
  double robot_radius = 0.3;
  double lambda_g = 3.0;
  int samples_per_primitive = 5;
  int max_depth = 8;
  double goal_radius = 0.5;
  bool dedup = true;
  double dedup_xy = 0.1;         // meters
  double dedup_theta_deg = 10.0;
  double robot_height = 0.3;   // z of collision points
  double camera_height = 0.5;  // z of the camera
  double ground_z = 0.25;  // reconstructed floor Gaussians float above z = 0
  std::size_t max_expansions = 20000;

  void validate() const;
  CollisionParams collision() const { return {robot_radius, lambda_g, ground_z}; }
};

double wrap_angle(double a);

/// Exact unicycle flow under a constant control.
RobotState propagate(const RobotState& x, const ControlInput& u, double dt);

/// Uniform v grid on [0, v_max] times uniform omega grid on [-omega_max, omega_max].
std::vector<ControlInput> control_set(const PlannerConfig& cfg);

MotionPrimitive make_primitive(const RobotState& x, const ControlInput& u, const PlannerConfig& cfg);

/// One primitive per control in control_set(), in that order.
std::vector<MotionPrimitive> expand(const RobotState& x, const PlannerConfig& cfg);

/// Forward-looking camera on a ground robot: yaw = heading, fixed height.
Pose camera_pose(const RobotState& x, double height);

struct Trajectory {
  std::vector<MotionPrimitive> primitives;
  double cost = 0.0;
  double utility = 0.0;
  bool reaches_goal = false;

  double duration() const;
  RobotState start_state(const RobotState& fallback) const;
  /// State at time t along the trajectory (clamped to [0, duration]).
  RobotState state_at(double t, const RobotState& fallback) const;
};

struct PlanResult {
  Trajectory selected;
  std::size_t selected_index = 0;
  std::vector<Trajectory> candidates;  // ascending cost
  Vec2 goal = Vec2::Zero();
  bool reached_goal = false;
  std::size_t expansions = 0;
};

struct PlanError : std::runtime_error {
  enum class Kind { kTrapped, kUnreachable };
  PlanError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

/// Furthest point along the polyline that stays within `horizon` of start.
Vec2 select_goal(const Vec2& start, std::span<const Vec2> waypoints, double horizon);

using ViewScore = std::function<double(const Pose&)>;

/// Scores a candidate: sum of view scores at the L + 1 segment end states.
double trajectory_utility(const Trajectory& traj, const RobotState& start, const ViewScore& score,
                          const PlannerConfig& cfg);

/// A* from start to the ball of goal_radius around goal, then information
/// selection among the n_traj cheapest candidates. Throws PlanError.
PlanResult plan_to_goal(const RobotState& start, const Vec2& goal, const CollisionIndex& index,
                        const ViewScore& score, const PlannerConfig& cfg);

/// plan_to_goal() towards select_goal(guidance, horizon).
PlanResult plan(const RobotState& start, std::span<const Vec2> guidance, const CollisionIndex& index,
                const ViewScore& score, const PlannerConfig& cfg);

}  // namespace gsx

// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// The closed exploration loop: sense, update the map, score regions, pick a
// guidance path, plan a trajectory and execute its first primitive.

#pragma once

#include "gsx/global_planner.hpp"
#include "gsx/info_gain.hpp"
#include "gsx/local_planner.hpp"
#include "gsx/mapper.hpp"
#include "gsx/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace gsx {

struct ExplorationConfig {
  int budget_steps = 150;
  std::uint64_t seed = 0;
  VariantKind variant = VariantKind::kStandard;
  bool random_spawn = true;       // false uses the scene spawn
  double odometry_spacing = 0.5;  // meters between odometry nodes
  double consume_radius = 0.5;    // meters, viewpoint counts as visited

  void validate() const;
};

struct EvalConfig {
  int poses = 100;
  std::uint64_t seed = 7;
};

struct RunConfig {
  SensorModel sensor;
  MapperConfig mapper;
  InfoConfig info;
  PlannerConfig planner;
  ExplorationConfig exploration;
  EvalConfig eval;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct StepReport {
  int step = 0;
  RobotState state;  // after executing the step
  ControlInput control;
  UpdateStats update;
  std::size_t regions = 0;
  double omega_mean = 0.0;
  double omega_max = 0.0;
  double guidance_score = 0.0;
  double xi = 0.0;  // utility of the executed trajectory
  double plan_cost = 0.0;
  Vec2 goal = Vec2::Zero();  // local planner goal
  std::size_t candidates = 0;
  std::size_t expansions = 0;
  bool recovery = false;
  std::string note;  // why recovery was needed
};

class Explorer {
 public:
  Explorer(const Scene& scene, RunConfig cfg);

  bool done() const { return complete_ || step_count_ >= cfg_.exploration.budget_steps; }
  bool exploration_complete() const { return complete_; }
  /// Throws std::logic_error once done().
  StepReport step();

  const RunConfig& config() const { return cfg_; }
  const RobotState& state() const { return state_; }
  const GaussianMap& map() const { return map_; }
  const UncertaintyLedger& ledger() const { return ledger_; }
  const TopoTree& tree() const { return tree_; }
  const RegionGrid& grid() const { return grid_; }
  /// State at every executed primitive sample, starting with the spawn.
  const std::vector<RobotState>& executed_samples() const { return executed_; }
  const std::vector<StepReport>& reports() const { return reports_; }

 private:
  void resample_viewpoints(const CollisionIndex& index);

  const Scene& scene_;
  RunConfig cfg_;
  std::mt19937_64 rng_;
  GaussianMap map_;
  UncertaintyLedger ledger_;
  RegionGrid grid_;
  TopoTree tree_;
  RobotState state_;
  RobotState spawn_;
  std::vector<RobotState> executed_;
  std::vector<StepReport> reports_;
  int step_count_ = 0;
  bool complete_ = false;
};

struct RunArtifacts {
  GaussianMap map;
  UncertaintyLedger ledger;
  TopoTree tree;
  RegionGrid grid;
  RobotState spawn;
  std::vector<StepReport> steps;
  std::vector<RobotState> executed_samples;
  bool exploration_complete = false;
};

RunArtifacts run(const Scene& scene, const RunConfig& cfg);

/// trajectory.csv: step,x,y,theta,v,omega,recovery (row 0 is the spawn).
void write_trajectory_csv(std::ostream& out, const RunArtifacts& run);
/// steps.csv: one row per StepReport without wall-clock fields.
void write_steps_csv(std::ostream& out, const RunArtifacts& run);

/// Writes trajectory.csv, steps.csv, updates.csv, regions.csv, tree.csv and
/// map.rtg into dir (created if needed).
void write_run_artifacts(const std::filesystem::path& dir, const RunArtifacts& run);

}  // namespace gsx

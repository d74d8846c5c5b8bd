// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/sim.hpp"

#include "gsx/map_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace gsx {

void ExplorationConfig::validate() const {
  if (budget_steps < 1) throw std::invalid_argument("exploration: budget_steps must be >= 1");
  if (!(odometry_spacing > 0)) throw std::invalid_argument("exploration: odometry_spacing must be positive");
  if (!(consume_radius >= 0)) throw std::invalid_argument("exploration: consume_radius must be >= 0");
}

void RunConfig::validate() const {
  sensor.validate();
  mapper.validate();
  planner.validate();
  exploration.validate();
  if (!(info.lambda_xi >= 0)) throw std::invalid_argument("info: lambda_xi must be >= 0");
  if (!(info.cell_size > 0)) throw std::invalid_argument("info: cell_size must be positive");
  if (info.top_k_regions < 1) throw std::invalid_argument("info: top_k_regions must be >= 1");
  if (info.viewpoints_per_region < 1) throw std::invalid_argument("info: viewpoints_per_region must be >= 1");
  if (eval.poses < 0) throw std::invalid_argument("eval: poses must be >= 0");
}

Explorer::Explorer(const Scene& scene, RunConfig cfg) : scene_(scene), cfg_(std::move(cfg)), rng_(cfg_.exploration.seed) {
  cfg_.validate();
  cfg_.sensor.intr.max_range = cfg_.sensor.max_range;
  grid_.origin = scene_.bounds.min;
  grid_.cell_size = cfg_.info.cell_size;
  if (cfg_.exploration.random_spawn) {
    std::mt19937_64 spawn_rng(cfg_.exploration.seed * 0x9e3779b97f4a7c15ULL + 1);
    CollisionParams params = cfg_.planner.collision();
    params.ground_z = scene_.ground_z;
    state_ = sample_free_state(scene_, spawn_rng, params, cfg_.planner.robot_height, cfg_.planner.robot_radius);
  } else {
    state_ = scene_.spawn;
  }
  spawn_ = state_;
  executed_.push_back(state_);
  append_odometry(tree_, state_.p, state_.theta, cfg_.exploration.odometry_spacing);
}

void Explorer::resample_viewpoints(const CollisionIndex& index) {
  std::vector<std::pair<double, CellKey>> ranked;
  for (const auto& [key, region] : grid_.cells) ranked.emplace_back(region.omega, key);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (ranked.size() > static_cast<std::size_t>(cfg_.info.top_k_regions)) ranked.resize(cfg_.info.top_k_regions);

  const double margin = cfg_.planner.robot_radius;
  const auto admissible = [&](const Vec2& p) {
    return scene_.bounds.contains_xy(p, margin) && index.is_free({p.x(), p.y(), cfg_.planner.robot_height});
  };
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (const auto& [omega, key] : ranked) {
    if (!(omega > 0)) continue;
    const bool covered = std::any_of(tree_.nodes().begin(), tree_.nodes().end(), [&](const TopoNode& n) {
      return n.kind == NodeKind::kViewpoint && n.active && n.region == key;
    });
    if (covered) continue;
    sample_viewpoints(tree_, key, grid_.cells.at(key).centroid, omega, cfg_.sensor.intr, cfg_.info.cell_size,
                      cfg_.info.viewpoints_per_region, phase(rng_), admissible);
  }
}

StepReport Explorer::step() {
  if (done()) throw std::logic_error("explorer: budget exhausted");
  StepReport report;
  report.step = step_count_ + 1;
  const std::uint64_t frame_index = static_cast<std::uint64_t>(step_count_);

  // Sense and map.
  const Pose camera = camera_pose(state_, cfg_.planner.camera_height);
  const Frame frame = sense(scene_, camera, cfg_.sensor, &rng_);
  report.update = map_update(map_, ledger_, frame, camera, cfg_.sensor.intr, cfg_.mapper, frame_index);

  // Region utilities and viewpoint bookkeeping.
  const bool squared = cfg_.exploration.variant == VariantKind::kSquared;
  region_utilities(map_, ledger_, grid_, cfg_.info.ground_z, squared);
  report.regions = grid_.cells.size();
  for (const auto& [key, region] : grid_.cells) {
    report.omega_mean += region.omega;
    report.omega_max = std::max(report.omega_max, region.omega);
  }
  if (!grid_.cells.empty()) report.omega_mean /= static_cast<double>(grid_.cells.size());

  const CollisionIndex index(map_, cfg_.planner.collision());
  refresh_utilities(tree_, grid_);
  resample_viewpoints(index);
  consume_viewpoints(tree_, state_.p, cfg_.exploration.consume_radius);

  // Plan. Any failure falls back to rotating in place for one primitive.
  ControlInput control{0.0, cfg_.planner.omega_max};
  MotionPrimitive executed = make_primitive(state_, control, cfg_.planner);
  report.recovery = true;
  try {
    GuidancePath path = guidance(tree_, *tree_.last_odometry());
    report.guidance_score = path.score;
    path.waypoints.insert(path.waypoints.begin(), state_.p);

    const ViewScorer scorer(map_, ledger_, cfg_.exploration.variant, cfg_.info, cfg_.sensor.intr,
                            cfg_.sensor.max_range);
    const ViewScore score = [&scorer](const Pose& pose) { return scorer.score(pose); };
    const PlanResult result = plan(state_, path.waypoints, index, score, cfg_.planner);
    report.goal = result.goal;
    report.candidates = result.candidates.size();
    report.expansions = result.expansions;
    if (!result.selected.primitives.empty()) {
      executed = result.selected.primitives.front();
      control = executed.u;
      report.xi = result.selected.utility;
      report.plan_cost = result.selected.cost;
      report.recovery = false;
    } else {
      report.note = "at goal";
    }
  } catch (const ExplorationComplete&) {
    complete_ = true;
    report.note = "exploration complete";
    report.recovery = false;
    control = {0.0, 0.0};
    executed = make_primitive(state_, control, cfg_.planner);
  } catch (const PlanError& e) {
    report.note = e.kind == PlanError::Kind::kTrapped ? "trapped" : "unreachable";
  }

  // Act.
  for (std::size_t k = 1; k < executed.samples.size(); ++k) executed_.push_back(executed.samples[k]);
  state_ = executed.end;
  append_odometry(tree_, state_.p, state_.theta, cfg_.exploration.odometry_spacing);

  report.state = state_;
  report.control = control;
  ++step_count_;
  reports_.push_back(report);
  return report;
}

RunArtifacts run(const Scene& scene, const RunConfig& cfg) {
  Explorer explorer(scene, cfg);
  while (!explorer.done()) explorer.step();
  RunArtifacts out;
  out.map = explorer.map();
  out.ledger = explorer.ledger();
  out.tree = explorer.tree();
  out.grid = explorer.grid();
  out.spawn = explorer.executed_samples().front();
  out.steps = explorer.reports();
  out.executed_samples = explorer.executed_samples();
  out.exploration_complete = explorer.exploration_complete();
  return out;
}

void write_trajectory_csv(std::ostream& out, const RunArtifacts& run) {
  out << "step,x,y,theta,v,omega,recovery\n";
  out << std::setprecision(17);
  out << 0 << ',' << run.spawn.p.x() << ',' << run.spawn.p.y() << ',' << run.spawn.theta << ",0,0,0\n";
  for (const StepReport& r : run.steps) {
    out << r.step << ',' << r.state.p.x() << ',' << r.state.p.y() << ',' << r.state.theta << ',' << r.control.v
        << ',' << r.control.omega << ',' << (r.recovery ? 1 : 0) << '\n';
  }
}

void write_steps_csv(std::ostream& out, const RunArtifacts& run) {
  out << "step,x,y,theta,loss,added,pruned,gaussian_count,regions,omega_mean,omega_max,guidance_score,xi,"
         "plan_cost,goal_x,goal_y,candidates,expansions,recovery,note\n";
  out << std::setprecision(10);
  for (const StepReport& r : run.steps) {
    out << r.step << ',' << r.state.p.x() << ',' << r.state.p.y() << ',' << r.state.theta << ',' << r.update.loss
        << ',' << r.update.added << ',' << r.update.pruned << ',' << r.update.gaussian_count << ',' << r.regions
        << ',' << r.omega_mean << ',' << r.omega_max << ',' << r.guidance_score << ',' << r.xi << ','
        << r.plan_cost << ',' << r.goal.x() << ',' << r.goal.y() << ',' << r.candidates << ',' << r.expansions << ',' << (r.recovery ? 1 : 0) << ','
        << r.note << '\n';
  }
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_run_artifacts(const std::filesystem::path& dir, const RunArtifacts& run) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "trajectory.csv");
    write_trajectory_csv(out, run);
  }
  {
    auto out = open_out(dir / "steps.csv");
    write_steps_csv(out, run);
  }
  {
    auto out = open_out(dir / "updates.csv");
    write_update_header(out);
    for (const StepReport& r : run.steps) write_update_row(out, r.update);
  }
  {
    auto out = open_out(dir / "regions.csv");
    write_regions_csv(out, run.grid);
  }
  {
    auto out = open_out(dir / "tree.csv");
    out << std::setprecision(10);
    write_tree_csv(out, run.tree);
  }
  write_snapshot(dir / "map.rtg", run.map, &run.ledger);
}

}  // namespace gsx

// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/local_planner.hpp"

#include "gsx/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <unordered_map>

namespace gsx {

void PlannerConfig::validate() const {
  if (n_v < 1 || n_omega < 1 || n_v * n_omega < 2) throw std::invalid_argument("planner: need n_v * n_omega >= 2");
  if (!(v_max > 0 && omega_max > 0 && dt > 0 && lambda_t > 0 && horizon > 0 && robot_radius > 0 && lambda_g > 0 &&
        goal_radius > 0)) {
    throw std::invalid_argument("planner: rates, horizon and radii must be positive");
  }
  if (n_traj < 1 || samples_per_primitive < 2 || max_depth < 1) {
    throw std::invalid_argument("planner: n_traj >= 1, samples_per_primitive >= 2, max_depth >= 1 required");
  }
  if (info_segments < 0) throw std::invalid_argument("planner: info_segments must be >= 0");
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

RobotState propagate(const RobotState& x, const ControlInput& u, double dt) {
  RobotState out;
  if (u.omega == 0.0) {
    out.p = x.p + u.v * dt * Vec2(std::cos(x.theta), std::sin(x.theta));
    out.theta = wrap_angle(x.theta);
    return out;
  }
  const double turned = x.theta + u.omega * dt;
  const double r = u.v / u.omega;
  out.p = x.p + r * Vec2(std::sin(turned) - std::sin(x.theta), std::cos(x.theta) - std::cos(turned));
  out.theta = wrap_angle(turned);
  return out;
}

std::vector<ControlInput> control_set(const PlannerConfig& cfg) {
  std::vector<ControlInput> out;
  out.reserve(static_cast<std::size_t>(cfg.n_v) * cfg.n_omega);
  for (int i = 0; i < cfg.n_v; ++i) {
    const double v = cfg.n_v == 1 ? cfg.v_max : cfg.v_max * i / (cfg.n_v - 1);
    for (int j = 0; j < cfg.n_omega; ++j) {
      // Odd-symmetric in j so mirrored turns are exact negatives.
      const double w = cfg.n_omega == 1 ? 0.0 : cfg.omega_max * (2 * j - (cfg.n_omega - 1)) / (cfg.n_omega - 1);
      out.push_back({v, w});
    }
  }
  return out;
}

MotionPrimitive make_primitive(const RobotState& x, const ControlInput& u, const PlannerConfig& cfg) {
  MotionPrimitive m;
  m.u = u;
  m.duration = cfg.dt;
  m.start = x;
  m.samples.reserve(cfg.samples_per_primitive);
  m.samples.push_back(x);
  for (int k = 1; k < cfg.samples_per_primitive; ++k) {
    m.samples.push_back(propagate(x, u, cfg.dt * k / (cfg.samples_per_primitive - 1)));
  }
  m.end = m.samples.back();
  m.cost = cfg.lambda_t * cfg.dt + (u.v * u.v + u.omega * u.omega) * cfg.dt;
  return m;
}

std::vector<MotionPrimitive> expand(const RobotState& x, const PlannerConfig& cfg) {
  std::vector<MotionPrimitive> out;
  for (const ControlInput& u : control_set(cfg)) out.push_back(make_primitive(x, u, cfg));
  return out;
}

Pose camera_pose(const RobotState& x, double height) {
  const double c = std::cos(x.theta), s = std::sin(x.theta);
  Pose pose;
  pose.rotation.col(0) = Vec3(s, -c, 0.0);   // image right
  pose.rotation.col(1) = Vec3(0.0, 0.0, -1.0);  // image down
  pose.rotation.col(2) = Vec3(c, s, 0.0);    // optical axis
  pose.translation = Vec3(x.p.x(), x.p.y(), height);
  return pose;
}

double Trajectory::duration() const {
  double t = 0.0;
  for (const auto& m : primitives) t += m.duration;
  return t;
}

RobotState Trajectory::start_state(const RobotState& fallback) const {
  return primitives.empty() ? fallback : primitives.front().start;
}

RobotState Trajectory::state_at(double t, const RobotState& fallback) const {
  if (primitives.empty()) return fallback;
  double t0 = 0.0;
  for (const auto& m : primitives) {
    if (t <= t0) return m.start;
    if (t < t0 + m.duration) return propagate(m.start, m.u, t - t0);
    t0 += m.duration;
  }
  return primitives.back().end;
}

Vec2 select_goal(const Vec2& start, std::span<const Vec2> waypoints, double horizon) {
  if (waypoints.empty()) return start;
  double best_s = -1.0;
  Vec2 best = waypoints.front();
  double s0 = 0.0;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const Vec2 a = waypoints[i];
    const Vec2 b = i + 1 < waypoints.size() ? waypoints[i + 1] : a;
    const Vec2 d = b - a;
    const double len = d.norm();
    const Vec2 w = a - start;
    // |a + t d - start|^2 <= horizon^2 for t in [0, 1]
    double t_hi = -1.0;
    if (len == 0.0) {
      if (w.norm() <= horizon) t_hi = 0.0;
    } else {
      const double qa = d.squaredNorm();
      const double qb = 2.0 * d.dot(w);
      const double qc = w.squaredNorm() - horizon * horizon;
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double lo = (-qb - sq) / (2.0 * qa);
        const double hi = (-qb + sq) / (2.0 * qa);
        if (hi >= 0.0 && lo <= 1.0) t_hi = std::min(1.0, hi);
      }
    }
    if (t_hi >= 0.0 && s0 + t_hi * len >= best_s) {
      best_s = s0 + t_hi * len;
      best = a + t_hi * d;
    }
    s0 += len;
  }
  if (best_s >= 0.0) return best;
  // Whole path out of range: head straight for its first point.
  const Vec2 dir = waypoints.front() - start;
  return start + horizon * dir.normalized();
}

double trajectory_utility(const Trajectory& traj, const RobotState& start, const ViewScore& score,
                          const PlannerConfig& cfg) {
  if (!score) return 0.0;
  if (traj.primitives.empty()) return score(camera_pose(start, cfg.camera_height));
  const int segments = cfg.info_segments > 0 ? cfg.info_segments : static_cast<int>(traj.primitives.size());
  const double tau = traj.duration();
  double total = 0.0;
  for (int l = 0; l <= segments; ++l) {
    total += score(camera_pose(traj.state_at(tau * l / segments, start), cfg.camera_height));
  }
  return total;
}

namespace {

struct SearchNode {
  RobotState state;
  double g = 0.0;
  double h = 0.0;
  int depth = 0;
  std::ptrdiff_t parent = -1;
  std::ptrdiff_t primitive = -1;
};

struct LatticeKeyHash {
  std::size_t operator()(const std::array<long long, 3>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (const long long v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};

}  // namespace

PlanResult plan_to_goal(const RobotState& start, const Vec2& goal, const CollisionIndex& index,
                        const ViewScore& score, const PlannerConfig& cfg) {
  cfg.validate();
  {
    const std::array<Vec2, 1> p{start.p};
    if (!collision_check(std::span<const Vec2>(p), cfg.robot_height, index)[0]) {
      throw PlanError(PlanError::Kind::kTrapped, "trapped: start state is in collision");
    }
  }

  const auto heuristic = [&](const Vec2& p) {
    return cfg.lambda_t * std::max(0.0, (goal - p).norm() - cfg.goal_radius) / cfg.v_max;
  };
  const auto in_goal = [&](const Vec2& p) { return (goal - p).norm() <= cfg.goal_radius; };
  const int theta_bins = std::max(1, static_cast<int>(std::lround(360.0 / cfg.dedup_theta_deg)));
  const auto lattice_key = [&](const RobotState& s) {
    const double theta_step = 2.0 * std::numbers::pi / theta_bins;
    long long tb = std::llround(s.theta / theta_step) % theta_bins;
    if (tb < 0) tb += theta_bins;
    return std::array<long long, 3>{std::llround(s.p.x() / cfg.dedup_xy), std::llround(s.p.y() / cfg.dedup_xy), tb};
  };

  std::vector<SearchNode> nodes;
  std::vector<MotionPrimitive> prims;
  std::unordered_map<std::array<long long, 3>, double, LatticeKeyHash> best_g;
  using Entry = std::pair<double, std::size_t>;  // (f, node index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  nodes.push_back({start, 0.0, heuristic(start.p), 0, -1, -1});
  if (cfg.dedup) best_g[lattice_key(start)] = 0.0;
  open.push({nodes[0].h, 0});

  std::vector<std::size_t> goal_nodes;
  std::size_t expansions = 0;
  bool root_expanded = false;
  bool root_has_free_child = false;
  while (!open.empty() && goal_nodes.size() < static_cast<std::size_t>(cfg.n_traj)) {
    const std::size_t cur = open.top().second;
    open.pop();
    const SearchNode node = nodes[cur];
    if (in_goal(node.state.p)) {
      goal_nodes.push_back(cur);
      continue;
    }
    if (node.depth >= cfg.max_depth) continue;
    if (expansions >= cfg.max_expansions) break;
    ++expansions;

    std::vector<MotionPrimitive> children = expand(node.state, cfg);
    std::vector<Vec2> points;
    points.reserve(children.size() * (cfg.samples_per_primitive - 1));
    for (const auto& m : children) {
      for (std::size_t k = 1; k < m.samples.size(); ++k) points.push_back(m.samples[k].p);
    }
    const auto free = collision_check(std::span<const Vec2>(points), cfg.robot_height, index);

    std::size_t offset = 0;
    for (auto& m : children) {
      const std::size_t count = m.samples.size() - 1;
      const bool ok = std::all_of(free.begin() + offset, free.begin() + offset + count, [](auto f) { return f; });
      offset += count;
      if (!ok) continue;
      if (cur == 0) root_has_free_child = true;
      const double g = node.g + m.cost;
      if (cfg.dedup) {
        const auto key = lattice_key(m.end);
        const auto it = best_g.find(key);
        if (it != best_g.end() && it->second <= g) continue;
        best_g[key] = g;
      }
      prims.push_back(std::move(m));
      SearchNode child{prims.back().end, g, heuristic(prims.back().end.p), node.depth + 1,
                       static_cast<std::ptrdiff_t>(cur), static_cast<std::ptrdiff_t>(prims.size() - 1)};
      nodes.push_back(child);
      open.push({child.g + child.h, nodes.size() - 1});
    }
    if (cur == 0) root_expanded = true;
  }

  if (root_expanded && !root_has_free_child && goal_nodes.empty()) {
    throw PlanError(PlanError::Kind::kTrapped, "trapped: every primitive from the start collides");
  }

  PlanResult result;
  result.goal = goal;
  result.expansions = expansions;
  result.reached_goal = !goal_nodes.empty();

  std::vector<std::size_t> chosen = goal_nodes;
  if (chosen.empty()) {
    for (std::size_t i = 1; i < nodes.size(); ++i) chosen.push_back(i);
    std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
      if (nodes[a].h != nodes[b].h) return nodes[a].h < nodes[b].h;
      if (nodes[a].g != nodes[b].g) return nodes[a].g < nodes[b].g;
      return a < b;
    });
    if (chosen.size() > static_cast<std::size_t>(cfg.n_traj)) chosen.resize(cfg.n_traj);
  }
  if (chosen.empty()) throw PlanError(PlanError::Kind::kUnreachable, "unreachable: no candidate trajectory");
  std::stable_sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
    return nodes[a].g != nodes[b].g ? nodes[a].g < nodes[b].g : a < b;
  });

  for (const std::size_t leaf : chosen) {
    Trajectory t;
    t.cost = nodes[leaf].g;
    t.reaches_goal = result.reached_goal;
    for (std::ptrdiff_t at = static_cast<std::ptrdiff_t>(leaf); nodes[at].parent >= 0; at = nodes[at].parent) {
      t.primitives.push_back(prims[nodes[at].primitive]);
    }
    std::reverse(t.primitives.begin(), t.primitives.end());
    result.candidates.push_back(std::move(t));
  }

  parallel_for(result.candidates.size(), [&](std::size_t i) {
    result.candidates[i].utility = trajectory_utility(result.candidates[i], start, score, cfg);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.candidates.size(); ++i) {
    const Trajectory& c = result.candidates[i];
    const Trajectory& b = result.candidates[best];
    if (c.utility > b.utility || (c.utility == b.utility && c.cost < b.cost)) best = i;
  }
  result.selected_index = best;
  result.selected = result.candidates[best];
  return result;
}

PlanResult plan(const RobotState& start, std::span<const Vec2> guidance, const CollisionIndex& index,
                const ViewScore& score, const PlannerConfig& cfg) {
  return plan_to_goal(start, select_goal(start.p, guidance, cfg.horizon), index, score, cfg);
}

}  // namespace gsx

// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>

namespace gsx {
namespace {

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

}  // namespace

NodeId TopoTree::add_node(TopoNode node) {
  node.id = nodes_.size();
  if (node.kind == NodeKind::kOdometry) last_odometry_ = node.id;
  nodes_.push_back(std::move(node));
  adjacency_.emplace_back();
  return nodes_.back().id;
}

void TopoTree::connect(NodeId a, NodeId b) {
  const double length = (nodes_.at(a).position - nodes_.at(b).position).norm();
  edges_.push_back({a, b, length});
  adjacency_[a].push_back(edges_.size() - 1);
  adjacency_[b].push_back(edges_.size() - 1);
}

std::optional<NodeId> append_odometry(TopoTree& tree, const Vec2& position, double heading, double min_spacing) {
  const auto last = tree.last_odometry();
  if (last && (tree.node(*last).position - position).norm() < min_spacing) return std::nullopt;
  TopoNode n;
  n.kind = NodeKind::kOdometry;
  n.position = position;
  n.heading = wrap_angle(heading);
  n.parent = last;
  const NodeId id = tree.add_node(n);
  if (last) tree.connect(*last, id);
  return id;
}

double viewing_distance(const CameraIntrinsics& intr, double cell_size) {
  const double fov = std::min(intr.hfov(), intr.vfov());
  return 0.5 * cell_size / std::tan(0.5 * fov);
}

std::vector<NodeId> sample_viewpoints(TopoTree& tree, const CellKey& region, const Vec3& centroid,
                                      double utility, const CameraIntrinsics& intr, double cell_size, int n,
                                      double phase, const std::function<bool(const Vec2&)>& admissible) {
  if (n < 1) throw std::invalid_argument("sample_viewpoints: n must be >= 1");
  if (!tree.last_odometry()) throw std::invalid_argument("sample_viewpoints: tree has no odometry node");
  const double radius = viewing_distance(intr, cell_size);
  const Vec2 center = centroid.head<2>();

  std::vector<NodeId> added;
  for (int k = 0; k < n; ++k) {
    const double angle = phase + 2.0 * std::numbers::pi * k / n;
    const Vec2 pos = center + radius * Vec2(std::cos(angle), std::sin(angle));
    if (admissible && !admissible(pos)) continue;

    std::optional<NodeId> nearest;
    double best = std::numeric_limits<double>::infinity();
    for (const TopoNode& node : tree.nodes()) {
      if (node.kind != NodeKind::kOdometry) continue;
      const double d = (node.position - pos).norm();
      if (d < best) {
        best = d;
        nearest = node.id;
      }
    }

    TopoNode vp;
    vp.kind = NodeKind::kViewpoint;
    vp.position = pos;
    vp.heading = wrap_angle(angle + std::numbers::pi);
    vp.utility = utility;
    vp.region = region;
    vp.parent = nearest;
    const NodeId id = tree.add_node(vp);
    tree.connect(*nearest, id);
    added.push_back(id);
  }
  return added;
}

ShortestPaths dijkstra(const TopoTree& tree, NodeId source) {
  const std::size_t n = tree.nodes().size();
  ShortestPaths sp;
  sp.distance.assign(n, std::numeric_limits<double>::infinity());
  sp.previous.assign(n, std::nullopt);
  if (source >= n) throw std::out_of_range("dijkstra: unknown source node");

  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  sp.distance[source] = 0.0;
  open.push({0.0, source});
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > sp.distance[u]) continue;
    for (const std::size_t e : tree.incident(u)) {
      const TopoEdge& edge = tree.edges()[e];
      const NodeId v = edge.a == u ? edge.b : edge.a;
      const double nd = d + edge.length;
      if (nd < sp.distance[v]) {
        sp.distance[v] = nd;
        sp.previous[v] = u;
        open.push({nd, v});
      }
    }
  }
  return sp;
}

GuidancePath guidance(const TopoTree& tree, NodeId current) {
  const ShortestPaths sp = dijkstra(tree, current);
  std::optional<NodeId> best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const TopoNode& node : tree.nodes()) {
    if (node.kind != NodeKind::kViewpoint || !node.active) continue;
    const double d = sp.distance[node.id];
    if (!std::isfinite(d)) continue;
    const double score = node.utility / std::exp(d);
    const bool better = !best || score > best_score ||
                        (score == best_score && d < sp.distance[*best]);  // ids ascend, so first wins
    if (better) {
      best = node.id;
      best_score = score;
    }
  }
  if (!best) throw ExplorationComplete();

  GuidancePath path;
  for (std::optional<NodeId> at = *best; at; at = sp.previous[*at]) path.nodes.push_back(*at);
  std::reverse(path.nodes.begin(), path.nodes.end());
  for (const NodeId id : path.nodes) path.waypoints.push_back(tree.node(id).position);
  path.length = sp.distance[*best];
  path.utility = tree.node(*best).utility;
  path.score = best_score;
  return path;
}

std::size_t consume_viewpoints(TopoTree& tree, const Vec2& position, double radius) {
  std::size_t consumed = 0;
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    TopoNode& n = tree.node(i);
    if (n.kind == NodeKind::kViewpoint && n.active && (n.position - position).norm() <= radius) {
      n.active = false;
      ++consumed;
    }
  }
  return consumed;
}

void refresh_utilities(TopoTree& tree, const RegionGrid& grid) {
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    TopoNode& n = tree.node(i);
    if (n.kind != NodeKind::kViewpoint || !n.region) continue;
    const auto it = grid.cells.find(*n.region);
    n.utility = it == grid.cells.end() ? 0.0 : it->second.omega;
  }
}

void write_tree_csv(std::ostream& out, const TopoTree& tree) {
  out << "id,kind,x,y,omega,parent\n";
  for (const TopoNode& n : tree.nodes()) {
    out << n.id << ',' << (n.kind == NodeKind::kOdometry ? "odometry" : "viewpoint") << ',' << n.position.x()
        << ',' << n.position.y() << ',' << n.utility << ',';
    if (n.parent) {
      out << *n.parent;
    } else {
      out << -1;
    }
    out << '\n';
  }
}

}  // namespace gsx

// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// Long-range guidance: a tree of odometry nodes along the traveled path with
// viewpoint leaves around high-utility regions, searched with Dijkstra and
// scored by utility / e^distance.

#pragma once

#include "gsx/info_gain.hpp"
#include "gsx/splat.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gsx {

using NodeId = std::size_t;

enum class NodeKind { kOdometry, kViewpoint };

struct TopoNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::kOdometry;
  Vec2 position = Vec2::Zero();
  double heading = 0.0;
  double utility = 0.0;               // viewpoint only
  std::optional<CellKey> region;      // viewpoint only
  std::optional<NodeId> parent;       // the node this one was attached to
  bool active = true;                 // viewpoint still eligible for guidance
};

struct TopoEdge {
  NodeId a = 0;
  NodeId b = 0;
  double length = 0.0;
};

class TopoTree {
 public:
  const std::vector<TopoNode>& nodes() const { return nodes_; }
  const std::vector<TopoEdge>& edges() const { return edges_; }
  const TopoNode& node(NodeId id) const { return nodes_.at(id); }
  TopoNode& node(NodeId id) { return nodes_.at(id); }
  const std::vector<std::size_t>& incident(NodeId id) const { return adjacency_.at(id); }
  std::optional<NodeId> last_odometry() const { return last_odometry_; }
  /// Assigns the id; odometry nodes become the new last odometry node.
  NodeId add_node(TopoNode node);
  void connect(NodeId a, NodeId b);

 private:
  std::vector<TopoNode> nodes_;
  std::vector<TopoEdge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;  // edge indices per node
  std::optional<NodeId> last_odometry_;
};

/// Adds an odometry node when the robot is at least min_spacing from the
/// previous one (always on the first call) and links it to that node.
std::optional<NodeId> append_odometry(TopoTree& tree, const Vec2& position, double heading,
                                      double min_spacing = 0.5);

/// Distance at which one region of side cell_size fills the narrower field of view.
double viewing_distance(const CameraIntrinsics& intr, double cell_size);

/// Places n viewpoints on a circle around the region centroid, facing it,
/// each linked to its nearest odometry node. Candidates rejected by
/// `admissible` are skipped. `phase` rotates the circle.
std::vector<NodeId> sample_viewpoints(TopoTree& tree, const CellKey& region, const Vec3& centroid,
                                      double utility, const CameraIntrinsics& intr, double cell_size, int n,
                                      double phase = 0.0,
                                      const std::function<bool(const Vec2&)>& admissible = {});

struct ShortestPaths {
  std::vector<double> distance;  // +inf when unreachable
  std::vector<std::optional<NodeId>> previous;
};

ShortestPaths dijkstra(const TopoTree& tree, NodeId source);

struct GuidancePath {
  std::vector<NodeId> nodes;
  std::vector<Vec2> waypoints;
  double length = 0.0;
  double utility = 0.0;
  double score = 0.0;  // utility / e^length
};

struct ExplorationComplete : std::runtime_error {
  ExplorationComplete() : std::runtime_error("exploration complete: no active viewpoint") {}
};

/// Path from `current` to the active viewpoint with the largest
/// utility / e^distance; ties prefer the shorter path, then the lower id.
/// Throws ExplorationComplete when no active viewpoint is reachable.
GuidancePath guidance(const TopoTree& tree, NodeId current);

/// Deactivates viewpoints within `radius` of the position. Returns how many.
std::size_t consume_viewpoints(TopoTree& tree, const Vec2& position, double radius = 0.5);

/// Re-reads viewpoint utilities from the grid; regions that vanished score 0.
void refresh_utilities(TopoTree& tree, const RegionGrid& grid);

/// CSV: id,kind,x,y,omega,parent (parent -1 for the root).
void write_tree_csv(std::ostream& out, const TopoTree& tree);

}  // namespace gsx

// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/global_planner.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace gsx {
namespace {

NodeId viewpoint(TopoTree& tree, NodeId parent, const Vec2& at, double utility) {
  TopoNode vp;
  vp.kind = NodeKind::kViewpoint;
  vp.position = at;
  vp.utility = utility;
  vp.region = CellKey{0, 0, 0};
  vp.parent = parent;
  const NodeId id = tree.add_node(vp);
  tree.connect(parent, id);
  return id;
}

TEST(Odometry, SpacingRule) {
  TopoTree tree;
  const auto root = append_odometry(tree, {0, 0}, 0, 0.5);
  ASSERT_TRUE(root);
  EXPECT_TRUE(tree.edges().empty());
  EXPECT_FALSE(append_odometry(tree, {0.3, 0}, 0, 0.5));
  const auto next = append_odometry(tree, {0.6, 0}, 0, 0.5);
  ASSERT_TRUE(next);
  ASSERT_EQ(tree.edges().size(), 1u);
  EXPECT_NEAR(tree.edges()[0].length, 0.6, 1e-15);
  EXPECT_EQ(tree.last_odometry(), next);
  EXPECT_EQ(tree.node(*next).parent, root);
}

TEST(Viewpoints, ViewingDistance) {
  CameraIntrinsics intr;  // 90 degree field of view
  EXPECT_NEAR(viewing_distance(intr, 2.5), 1.25, 1e-12);
}

TEST(Viewpoints, CircleAroundCentroid) {
  TopoTree tree;
  append_odometry(tree, {-5, 0}, 0);
  append_odometry(tree, {0, 3}, 0);
  append_odometry(tree, {4, -1}, 0);
  const Vec3 centroid(1, 1, 1);
  const auto ids = sample_viewpoints(tree, CellKey{1, 2, 0}, centroid, 0.7, CameraIntrinsics{}, 2.5, 8, 0.1);
  ASSERT_EQ(ids.size(), 8u);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const TopoNode& vp = tree.node(ids[k]);
    const Vec2 offset = vp.position - centroid.head<2>();
    EXPECT_NEAR(offset.norm(), 1.25, 1e-12);
    const double angle = std::atan2(offset.y(), offset.x());
    EXPECT_NEAR(std::remainder(angle - 0.1 - k * std::numbers::pi / 4, 2 * std::numbers::pi), 0, 1e-12);
    // Faces the centroid.
    EXPECT_NEAR(std::remainder(vp.heading - std::atan2(-offset.y(), -offset.x()), 2 * std::numbers::pi), 0, 1e-12);
    EXPECT_EQ(vp.utility, 0.7);
    EXPECT_EQ(vp.region, (CellKey{1, 2, 0}));
    // Linear scan for the nearest odometry node.
    NodeId nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (const TopoNode& n : tree.nodes()) {
      if (n.kind == NodeKind::kOdometry && (n.position - vp.position).norm() < best) {
        best = (n.position - vp.position).norm();
        nearest = n.id;
      }
    }
    EXPECT_EQ(vp.parent, nearest);
  }
}

TEST(Viewpoints, AdmissibilityFilter) {
  TopoTree tree;
  append_odometry(tree, {0, 0}, 0);
  const auto ids = sample_viewpoints(tree, CellKey{}, Vec3(0, 0, 0), 1, CameraIntrinsics{}, 2.5, 8, 0,
                                     [](const Vec2& p) { return p.x() > 0.1; });
  EXPECT_EQ(ids.size(), 3u);
}

TEST(Guidance, SingleViewpointAtZeroDistance) {
  TopoTree tree;
  const NodeId root = *append_odometry(tree, {0, 0}, 0);
  viewpoint(tree, root, {0, 0}, 1.0);
  const GuidancePath path = guidance(tree, root);
  EXPECT_DOUBLE_EQ(path.score, 1.0);
  EXPECT_EQ(path.length, 0.0);
}

TEST(Guidance, DiscountsByExponentialDistance) {
  TopoTree tree;
  const NodeId root = *append_odometry(tree, {0, 0}, 0);
  const NodeId a = viewpoint(tree, root, {1, 0}, 1.0);
  viewpoint(tree, root, {0, 2}, 2.0);
  const GuidancePath path = guidance(tree, root);
  EXPECT_EQ(path.nodes.back(), a);
  EXPECT_NEAR(path.score, 0.3679, 1e-4);
  EXPECT_NEAR(2.0 / std::exp(2.0), 0.2707, 1e-4);
}

TEST(Guidance, PathAlongChain) {
  TopoTree tree;
  const NodeId root = *append_odometry(tree, {0, 0}, 0);
  const NodeId x = *append_odometry(tree, {1, 0}, 0);
  const NodeId y = *append_odometry(tree, {1, 2}, 0);
  const NodeId vp = viewpoint(tree, y, {1, 2}, 1.0);
  const GuidancePath path = guidance(tree, root);
  EXPECT_EQ(path.nodes, (std::vector<NodeId>{root, x, y, vp}));
  EXPECT_NEAR(path.length, 3.0, 1e-15);
  ASSERT_EQ(path.waypoints.size(), 4u);
  EXPECT_EQ(path.waypoints[1], Vec2(1, 0));
}

TEST(Guidance, NoActiveViewpointMeansComplete) {
  TopoTree tree;
  const NodeId root = *append_odometry(tree, {0, 0}, 0);
  EXPECT_THROW(guidance(tree, root), ExplorationComplete);
  viewpoint(tree, root, {0.2, 0}, 1.0);
  EXPECT_EQ(consume_viewpoints(tree, {0, 0}, 0.5), 1u);
  EXPECT_THROW(guidance(tree, root), ExplorationComplete);
}

TEST(Guidance, ScoreIsMaximalOverViewpoints) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10, 10), w(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    TopoTree tree;
    const NodeId root = *append_odometry(tree, {0, 0}, 0);
    for (int i = 0; i < 15; ++i) append_odometry(tree, {u(rng), u(rng)}, 0);
    for (int i = 0; i < 10; ++i) {
      const NodeId parent = static_cast<NodeId>(rng() % 16);
      viewpoint(tree, parent, tree.node(parent).position + Vec2(w(rng), w(rng)), w(rng));
    }
    const ShortestPaths sp = dijkstra(tree, root);
    double best = -1;
    for (const TopoNode& n : tree.nodes()) {
      if (n.kind == NodeKind::kViewpoint) best = std::max(best, n.utility / std::exp(sp.distance[n.id]));
    }
    EXPECT_DOUBLE_EQ(guidance(tree, root).score, best);
  }
}

TEST(Refresh, ReadsGridUtilities) {
  TopoTree tree;
  const NodeId root = *append_odometry(tree, {0, 0}, 0);
  const NodeId vp = viewpoint(tree, root, {1, 0}, 1.0);
  RegionGrid grid;
  grid.cells[CellKey{0, 0, 0}].omega = 0.25;
  refresh_utilities(tree, grid);
  EXPECT_EQ(tree.node(vp).utility, 0.25);
  grid.cells.clear();
  refresh_utilities(tree, grid);
  EXPECT_EQ(tree.node(vp).utility, 0.0);
}

TEST(Tree, CsvRows) {
  TopoTree tree;
  const NodeId root = *append_odometry(tree, {0, 0}, 0);
  viewpoint(tree, root, {1, 0}, 1.0);
  std::ostringstream out;
  write_tree_csv(out, tree);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "id,kind,x,y,omega,parent");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

}  // namespace
}  // namespace gsx

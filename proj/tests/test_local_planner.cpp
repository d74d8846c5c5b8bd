// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/collision.hpp"
#include "gsx/info_gain.hpp"
#include "gsx/local_planner.hpp"
#include "gsx/mapper.hpp"
#include "gsx/parallel.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace gsx {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Propagate, ClosedFormExamples) {
  const RobotState o;
  const RobotState a = propagate(o, {1, 0}, 1);
  EXPECT_DOUBLE_EQ(a.p.x(), 1);
  EXPECT_DOUBLE_EQ(a.p.y(), 0);
  EXPECT_DOUBLE_EQ(a.theta, 0);

  const RobotState b = propagate(o, {1, kPi / 2}, 1);
  EXPECT_NEAR(b.p.x(), 2 / kPi, 1e-15);
  EXPECT_NEAR(b.p.y(), 2 / kPi, 1e-15);
  EXPECT_NEAR(b.theta, kPi / 2, 1e-15);

  const RobotState x{{1.5, -2}, 2.9};
  const RobotState c = propagate(x, {0, 0}, 3);
  EXPECT_EQ(c.p, x.p);
  EXPECT_EQ(c.theta, x.theta);
}

TEST(Propagate, MatchesNumericalIntegration) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const RobotState x{{3 * u(rng), 3 * u(rng)}, kPi * u(rng)};
    const ControlInput c{0.6 * std::abs(u(rng)), 0.9 * u(rng)};
    const RobotState exact = propagate(x, c, 1.0);
    const RobotState ref = oracle::integrate(x, c, 1.0);
    EXPECT_NEAR(exact.p.x(), ref.p.x(), 1e-10);
    EXPECT_NEAR(exact.p.y(), ref.p.y(), 1e-10);
    EXPECT_NEAR(std::remainder(exact.theta - ref.theta, 2 * kPi), 0, 1e-10);
    EXPECT_GT(exact.theta, -kPi);
    EXPECT_LE(exact.theta, kPi);
  }
}

TEST(Expand, DefaultControlGrid) {
  const PlannerConfig cfg;
  const auto prims = expand(RobotState{}, cfg);
  ASSERT_EQ(prims.size(), 15u);
  const std::vector<double> vs{0, 0.3, 0.6};
  const std::vector<double> ws{-0.9, -0.45, 0, 0.45, 0.9};
  for (std::size_t i = 0; i < prims.size(); ++i) {
    EXPECT_NEAR(prims[i].u.v, vs[i / 5], 1e-15);
    EXPECT_NEAR(prims[i].u.omega, ws[i % 5], 1e-15);
    EXPECT_EQ(prims[i].samples.size(), 5u);
    EXPECT_NEAR(prims[i].cost, cfg.lambda_t + vs[i / 5] * vs[i / 5] + ws[i % 5] * ws[i % 5], 1e-15);
  }
}

TEST(Expand, TurnRatesAreExactlySymmetric) {
  for (int n : {3, 5, 7, 9}) {
    PlannerConfig cfg;
    cfg.n_omega = n;
    cfg.omega_max = 0.9;
    const auto u = control_set(cfg);
    for (int j = 0; j < n; ++j) EXPECT_EQ(u[j].omega, -u[n - 1 - j].omega) << n << ' ' << j;
  }
}

TEST(Expand, SamplesFollowPropagate) {
  PlannerConfig cfg;
  const RobotState x{{0.5, 1}, 2.5};
  for (const MotionPrimitive& m : expand(x, cfg)) {
    for (std::size_t k = 1; k < m.samples.size(); ++k) {
      const RobotState step = propagate(m.samples[k - 1], m.u, cfg.dt / 4);
      EXPECT_NEAR((step.p - m.samples[k].p).norm(), 0, 1e-9);
      EXPECT_NEAR(std::remainder(step.theta - m.samples[k].theta, 2 * kPi), 0, 1e-9);
    }
    EXPECT_EQ(m.samples.front().p, x.p);
    EXPECT_EQ(m.end.p, m.samples.back().p);
  }
}

TEST(Collision, GammaRule) {
  GaussianMap map;
  Gaussian g;
  g.mean = {0, 0, 1};
  g.radius = 0.05;
  map.add(g);
  const CollisionIndex index(map, CollisionParams{0.3, 3.0, 0.05});
  EXPECT_TRUE(index.is_free({0.5, 0, 1}));
  EXPECT_FALSE(index.is_free({0.4, 0, 1}));
  EXPECT_TRUE(index.is_free({0.45, 0, 1}));  // boundary counts as free
}

TEST(Collision, GroundFilter) {
  GaussianMap map;
  Gaussian g;
  g.mean = {0, 0, 0.0};
  g.radius = 0.2;
  map.add(g);
  const CollisionIndex index(map, CollisionParams{});
  EXPECT_TRUE(index.is_free({0, 0, 0.3}));
  EXPECT_EQ(index.gaussian_count(), 0u);
}

GaussianMap clutter(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-5, 5), z(0, 2.5), r(0.01, 0.15);
  GaussianMap map;
  for (int i = 0; i < n; ++i) {
    Gaussian g;
    g.mean = {u(rng), u(rng), z(rng)};
    g.radius = r(rng);
    map.add(g);
  }
  return map;
}

TEST(Collision, MatchesAllPairsOracle) {
  std::mt19937_64 rng(5);
  const GaussianMap map = clutter(rng, 200);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<Vec3> points;
  for (int i = 0; i < 129; ++i) points.push_back({u(rng), u(rng), 0.3});
  const CollisionParams params;
  const CollisionIndex hashed(map, params);
  const CollisionIndex flat(map, params, Broadphase::kNone);
  const auto a = collision_check(points, hashed);
  const auto b = collision_check(points, flat, 1);
  std::size_t free = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const bool expected = oracle::is_free(points[i], map, params);
    EXPECT_EQ(a[i] != 0, expected) << i;
    EXPECT_EQ(b[i] != 0, expected) << i;
    free += expected;
  }
  EXPECT_GT(free, 0u);
  EXPECT_LT(free, points.size());
}

TEST(Collision, IndependentOfWorkerCount) {
  std::mt19937_64 rng(6);
  const GaussianMap map = clutter(rng, 3000);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<Vec2> points;
  for (int i = 0; i < 1000; ++i) points.push_back({u(rng), u(rng)});
  const CollisionIndex index(map, CollisionParams{});
  const auto base = collision_check(points, 0.3, index, 1);
  for (std::size_t w : {2u, 3u, 7u, 16u}) EXPECT_EQ(collision_check(points, 0.3, index, w), base);
}

TEST(SelectGoal, FurthestPointWithinHorizon) {
  const std::vector<Vec2> path{{0, 0}, {3, 0}, {3, 10}};
  const Vec2 g = select_goal({0, 0}, path, 5.0);
  EXPECT_NEAR(g.x(), 3, 1e-12);
  EXPECT_NEAR(g.y(), 4, 1e-12);
  const std::vector<Vec2> far{{20, 0}};
  EXPECT_NEAR((select_goal({0, 0}, far, 5.0) - Vec2(5, 0)).norm(), 0, 1e-12);
  const std::vector<Vec2> near{{1, 1}};
  EXPECT_EQ(select_goal({0, 0}, near, 5.0), Vec2(1, 1));
}

TEST(Plan, EmptyMapStraightAhead) {
  const PlannerConfig cfg;
  const CollisionIndex index(GaussianMap{}, cfg.collision());
  const PlanResult r = plan_to_goal(RobotState{}, {3, 0}, index, {}, cfg);
  ASSERT_TRUE(r.reached_goal);
  const RobotState end = r.selected.primitives.back().end;
  EXPECT_LE((end.p - Vec2(3, 0)).norm(), cfg.goal_radius);
  const double bound = 3.0 / cfg.v_max * (cfg.lambda_t + cfg.v_max * cfg.v_max);
  EXPECT_NEAR(r.candidates.front().cost, bound, 0.1 * bound);
  for (std::size_t i = 1; i < r.candidates.size(); ++i) EXPECT_LE(r.candidates[i - 1].cost, r.candidates[i].cost);
  EXPECT_LE(r.candidates.size(), static_cast<std::size_t>(cfg.n_traj));
}

TEST(Plan, WallForcesDetourAndEverySampleIsFree) {
  PlannerConfig cfg;
  cfg.max_depth = 10;
  GaussianMap map;
  for (int j = -10; j <= 10; ++j) {
    for (int k = 1; k <= 5; ++k) {
      Gaussian g;
      g.mean = {2.0, 0.1 * j, 0.2 * k};
      g.radius = 0.05;
      map.add(g);
    }
  }
  const CollisionIndex index(map, cfg.collision());
  const PlanResult r = plan_to_goal(RobotState{}, {4, 0}, index, {}, cfg);
  ASSERT_FALSE(r.candidates.empty());
  for (const Trajectory& t : r.candidates) {
    bool straight_through = true;
    for (const MotionPrimitive& m : t.primitives) {
      straight_through &= m.u.omega == 0.0;
      for (const RobotState& s : m.samples) {
        EXPECT_TRUE(oracle::is_free({s.p.x(), s.p.y(), cfg.robot_height}, map, cfg.collision()));
      }
    }
    EXPECT_FALSE(straight_through && t.reaches_goal);
  }
}

TEST(Plan, EqualCostPrefersInformativeCandidate) {
  PlannerConfig cfg;
  GaussianMap map;
  UncertaintyLedger ledger;
  for (int i = 0; i < 20; ++i) {
    Gaussian g;
    g.mean = {0.2 * (i % 5) - 0.4, 3.0 + 0.1 * (i / 5), 0.6};
    g.radius = 0.05;
    ledger.add_newborn(map.add(g), 0);
  }
  const CollisionIndex index(GaussianMap{}, cfg.collision());
  const ViewScorer scorer(map, ledger, VariantKind::kStandard, InfoConfig{}, CameraIntrinsics{}, 5.0);
  const ViewScore score = [&](const Pose& p) { return scorer.score(p); };
  const PlanResult r = plan_to_goal(RobotState{}, {-2, 0}, index, score, cfg);
  ASSERT_TRUE(r.reached_goal);
  const Trajectory& best = r.selected;
  ASSERT_FALSE(best.primitives.empty());
  // The cheapest plans come in mirror pairs; the one turning towards the cluster wins.
  bool mirror_found = false;
  for (const Trajectory& t : r.candidates) {
    if (t.cost != best.cost || t.primitives.size() != best.primitives.size()) continue;
    bool mirrored = true;
    for (std::size_t k = 0; k < t.primitives.size(); ++k) {
      mirrored &= t.primitives[k].u.omega == -best.primitives[k].u.omega && t.primitives[k].u.v == best.primitives[k].u.v;
    }
    mirror_found |= mirrored && best.primitives.front().u.omega != 0.0;
  }
  EXPECT_TRUE(mirror_found);
  EXPECT_GT(best.primitives.front().u.omega, 0.0);
  EXPECT_GT(best.utility, 0.0);
}

TEST(Plan, GoalAtStartIsFree) {
  const PlannerConfig cfg;
  const CollisionIndex index(GaussianMap{}, cfg.collision());
  const PlanResult r = plan_to_goal(RobotState{{1, 1}, 0.3}, {1.2, 1}, index, {}, cfg);
  EXPECT_TRUE(r.reached_goal);
  EXPECT_EQ(r.selected.cost, 0.0);
  EXPECT_TRUE(r.selected.primitives.empty());
  PlannerConfig shallow = cfg;
  shallow.max_depth = 3;
  EXPECT_EQ(oracle::astar_cost(RobotState{{1, 1}, 0.3}, {1.2, 1}, shallow, GaussianMap{}), 0.0);
}

TEST(Plan, TrappedStart) {
  PlannerConfig cfg;
  GaussianMap map;
  Gaussian g;
  g.mean = {0, 0, 0.3};
  g.radius = 0.1;
  map.add(g);
  const CollisionIndex index(map, cfg.collision());
  try {
    plan_to_goal(RobotState{}, {3, 0}, index, {}, cfg);
    FAIL() << "expected PlanError";
  } catch (const PlanError& e) {
    EXPECT_EQ(e.kind, PlanError::Kind::kTrapped);
  }
}

TEST(Plan, UnreachableWithinDepth) {
  PlannerConfig cfg;
  cfg.max_depth = 3;
  cfg.dedup = false;
  const CollisionIndex index(GaussianMap{}, cfg.collision());
  const PlanResult r = plan_to_goal(RobotState{}, {8, 0}, index, {}, cfg);
  EXPECT_FALSE(r.reached_goal);
  EXPECT_FALSE(r.candidates.empty());  // lowest-h leaves as fallback
  EXPECT_FALSE(oracle::astar_cost(RobotState{}, {8, 0}, cfg, GaussianMap{}));
}

TEST(Plan, OptimalCostMatchesExhaustiveSearch) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1, 1);
  PlannerConfig cfg;
  cfg.max_depth = 3;
  cfg.dedup = false;
  int reached = 0;
  for (int trial = 0; trial < 8; ++trial) {
    GaussianMap map;
    for (int i = 0; i < 3; ++i) {
      Gaussian g;
      g.mean = {2 * u(rng), 2 * u(rng), 0.3};
      g.radius = 0.03;
      map.add(g);
    }
    const RobotState start{{0, 0}, kPi * u(rng)};
    if (!oracle::is_free({0, 0, 0.3}, map, cfg.collision())) continue;
    const Vec2 goal(1.8 * u(rng), 1.8 * u(rng));
    const CollisionIndex index(map, cfg.collision());
    const auto expected = oracle::astar_cost(start, goal, cfg, map);
    const PlanResult r = plan_to_goal(start, goal, index, {}, cfg);
    ASSERT_EQ(r.reached_goal, expected.has_value());
    if (!expected) continue;
    ++reached;
    EXPECT_EQ(r.candidates.front().cost, *expected);
  }
  EXPECT_GT(reached, 3);
}

TEST(Plan, UtilityUsesSegmentEndpoints) {
  PlannerConfig cfg;
  Trajectory t;
  t.primitives.push_back(make_primitive(RobotState{}, {0.6, 0}, cfg));
  t.primitives.push_back(make_primitive(t.primitives.back().end, {0.6, 0.45}, cfg));
  int calls = 0;
  const ViewScore count = [&](const Pose&) { ++calls; return 1.0; };
  EXPECT_EQ(trajectory_utility(t, RobotState{}, count, cfg), 3.0);
  EXPECT_EQ(calls, 3);
  cfg.info_segments = 4;
  EXPECT_EQ(trajectory_utility(t, RobotState{}, count, cfg), 5.0);
}

TEST(CameraPose, LooksAlongHeading) {
  const Pose p = camera_pose(RobotState{{1, 2}, kPi / 2}, 0.5);
  EXPECT_TRUE(p.is_valid());
  const Vec3 ahead = p.to_camera({1, 5, 0.5});
  EXPECT_NEAR(ahead.x(), 0, 1e-12);
  EXPECT_NEAR(ahead.y(), 0, 1e-12);
  EXPECT_NEAR(ahead.z(), 3, 1e-12);
  EXPECT_GT(p.to_camera({1, 5, 0}).y(), 0);  // below the camera is image-down
}

TEST(PlannerConfig, Validation) {
  PlannerConfig cfg;
  cfg.n_v = 1;
  cfg.n_omega = 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.goal_radius = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace gsx

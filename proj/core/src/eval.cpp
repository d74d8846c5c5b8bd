// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/eval.hpp"

#include "gsx/info_gain.hpp"
#include "gsx/parallel.hpp"
#include "gsx/render.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace gsx {

double psnr(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("psnr: image sizes differ or are empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  const double mse = sum / static_cast<double>(a.size());
  if (mse <= 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / mse));
}

double depth_rmse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("depth_rmse: image sizes differ");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!is_valid_depth(a[i]) || !is_valid_depth(b[i])) continue;
    sum += (a[i] - b[i]) * (a[i] - b[i]);
    ++n;
  }
  if (n == 0) throw std::domain_error("depth_rmse: no pixel is valid in both images");
  return std::sqrt(sum / static_cast<double>(n));
}

std::vector<Pose> sample_test_poses(const Scene& scene, int n, std::uint64_t seed, const PlannerConfig& cfg) {
  std::vector<Pose> poses;
  if (n <= 0) return poses;
  std::mt19937_64 rng(seed);
  poses.reserve(n);
  CollisionParams params = cfg.collision();
  params.ground_z = scene.ground_z;
  for (int i = 0; i < n; ++i) {
    const RobotState s = sample_free_state(scene, rng, params, cfg.robot_height);
    poses.push_back(camera_pose(s, cfg.camera_height));
  }
  return poses;
}

MetricsReport evaluate(const GaussianMap& map, const Scene& scene, std::span<const Pose> poses,
                       const SensorModel& model) {
  SensorModel clean = model;
  clean.depth_noise_sigma = 0.0;
  clean.intr.max_range = clean.max_range;
  MetricsReport report;
  report.per_pose.resize(poses.size());
  // Renders are internally parallel, so poses run in order.
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const Frame truth = sense(scene, poses[i], clean, nullptr);
    Frame estimate = render(map, poses[i], clean.intr);
    for (double& d : estimate.depth) {
      if (is_valid_depth(d) && d > clean.max_range) d = kInvalidDepth;
    }
    PoseMetrics& m = report.per_pose[i];
    m.psnr_db = psnr(estimate.color, truth.color);
    m.ssim = ssim(estimate.color, truth.color, truth.width, truth.height, 3);
    try {
      m.depth_rmse_m = depth_rmse(estimate.depth, truth.depth);
    } catch (const std::domain_error&) {
      m.depth_rmse_m = std::numeric_limits<double>::quiet_NaN();
    }
  }
  for (const PoseMetrics& m : report.per_pose) {
    report.psnr_db += m.psnr_db;
    report.ssim += m.ssim;
    if (std::isfinite(m.depth_rmse_m)) {
      report.depth_rmse_m += m.depth_rmse_m;
      ++report.depth_poses;
    }
  }
  if (!report.per_pose.empty()) {
    report.psnr_db /= static_cast<double>(report.per_pose.size());
    report.ssim /= static_cast<double>(report.per_pose.size());
  }
  report.depth_rmse_m = report.depth_poses > 0 ? report.depth_rmse_m / static_cast<double>(report.depth_poses)
                                               : std::numeric_limits<double>::quiet_NaN();
  return report;
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report) {
  const auto old = out.precision(10);
  out << "pose,psnr_db,ssim,depth_rmse_m\n";
  for (std::size_t i = 0; i < report.per_pose.size(); ++i) {
    const PoseMetrics& m = report.per_pose[i];
    out << i << ',' << m.psnr_db << ',' << m.ssim << ',' << m.depth_rmse_m << '\n';
  }
  out << "mean," << report.psnr_db << ',' << report.ssim << ',' << report.depth_rmse_m << '\n';
  out.precision(old);
}

GaussianMap bench_map(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-10.0, 10.0);
  std::uniform_real_distribution<double> uz(0.1, 2.5);
  std::uniform_real_distribution<double> ur(0.02, 0.08);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  GaussianMap map;
  while (map.size() < count) {
    Gaussian g;
    g.mean = {ux(rng), ux(rng), uz(rng)};
    if (g.mean.x() > -1.5 && g.mean.x() < 7.0 && std::abs(g.mean.y()) < 1.5) continue;
    g.radius = ur(rng);
    g.opacity = 0.5 + 0.5 * u01(rng);
    g.color = {u01(rng), u01(rng), u01(rng)};
    map.add(g);
  }
  return map;
}

namespace {

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  for (const double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  for (const double x : v) s.std += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(s.std / static_cast<double>(v.size()));
  return s;
}

template <class Fn>
double time_ms(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<BenchRow> bench_planner(std::span<const std::size_t> sizes, std::size_t points, int repeats,
                                    std::uint64_t seed, std::size_t workers) {
  if (repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");
  const PlannerConfig cfg;
  std::vector<BenchRow> rows;
  for (const std::size_t size : sizes) {
    const GaussianMap map = bench_map(size, seed + size);
    std::mt19937_64 rng(seed ^ 0xbe7c4ULL);
    std::uniform_real_distribution<double> px(-1.0, 6.0);
    std::uniform_real_distribution<double> py(-2.0, 2.0);
    std::vector<Vec2> pts(points);
    for (Vec2& p : pts) p = {px(rng), py(rng)};

    const CollisionIndex exhaustive(map, cfg.collision(), Broadphase::kNone);
    BenchRow row;
    row.gaussian_count = size;
    row.points_checked = points;
    std::vector<double> serial_t, parallel_t, plan_t;
    for (int r = 0; r < repeats; ++r) {
      std::vector<std::uint8_t> serial, parallel;
      serial_t.push_back(time_ms([&] { serial = collision_check(pts, cfg.robot_height, exhaustive, 1); }));
      parallel_t.push_back(
          time_ms([&] { parallel = collision_check(pts, cfg.robot_height, exhaustive, workers); }));
      row.identical = row.identical && serial == parallel;
    }

    UncertaintyLedger ledger;
    std::uniform_real_distribution<double> disp(0.0, 0.1);
    for (const GaussianId id : map.ids()) ledger.set(id, disp(rng), 0);
    const std::array<Vec2, 2> guide{Vec2(0.0, 0.0), Vec2(cfg.horizon, 0.0)};
    for (int r = 0; r < repeats; ++r) {
      plan_t.push_back(time_ms([&] {
        const CollisionIndex index(map, cfg.collision());
        const ViewScorer scorer(map, ledger, VariantKind::kStandard, InfoConfig{}, CameraIntrinsics{},
                                CameraIntrinsics{}.max_range);
        const ViewScore score = [&scorer](const Pose& p) { return scorer.score(p); };
        plan(RobotState{}, guide, index, score, cfg);
      }));
    }

    const Stats s = stats(serial_t), p = stats(parallel_t), q = stats(plan_t);
    row.serial_ms = s.mean;
    row.serial_std_ms = s.std;
    row.parallel_ms = p.mean;
    row.parallel_std_ms = p.std;
    row.speedup = p.mean > 0 ? s.mean / p.mean : 0.0;
    row.plan_ms = q.mean;
    row.plan_std_ms = q.std;
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  const auto old = out.precision(6);
  out << "gaussian_count,points_checked,serial_ms,parallel_ms,speedup,serial_std_ms,parallel_std_ms,plan_ms,"
         "plan_std_ms,identical\n";
  for (const BenchRow& r : rows) {
    out << r.gaussian_count << ',' << r.points_checked << ',' << r.serial_ms << ',' << r.parallel_ms << ','
        << r.speedup << ',' << r.serial_std_ms << ',' << r.parallel_std_ms << ',' << r.plan_ms << ','
        << r.plan_std_ms << ',' << (r.identical ? 1 : 0) << '\n';
  }
  out.precision(old);
}

}  // namespace gsx

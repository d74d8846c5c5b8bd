// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// Map quality metrics on held-out poses and the collision-checking scaling
// benchmark.

#pragma once

#include "gsx/local_planner.hpp"
#include "gsx/scene.hpp"
#include "gsx/splat.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace gsx {

/// Cap reported for identical images.
inline constexpr double kPsnrCapDb = 99.0;

/// 10 log10(1 / MSE) over all channels with peak 1. Throws
/// std::invalid_argument on a size mismatch.
double psnr(std::span<const double> a, std::span<const double> b);

/// RMSE over pixels whose depth is valid in both images. Throws
/// std::domain_error when no pixel is valid in both.
double depth_rmse(std::span<const double> a, std::span<const double> b);

/// Free camera poses drawn uniformly over the scene bounds with uniform
/// heading, rejection-sampled against the ground-truth collision rule.
std::vector<Pose> sample_test_poses(const Scene& scene, int n, std::uint64_t seed, const PlannerConfig& cfg);

struct PoseMetrics {
  double psnr_db = 0.0;
  double ssim = 0.0;
  double depth_rmse_m = 0.0;  // NaN when no pixel is valid in both depths
};

struct MetricsReport {
  std::vector<PoseMetrics> per_pose;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double depth_rmse_m = 0.0;      // mean over poses with a finite value
  std::size_t depth_poses = 0;    // poses contributing to depth_rmse_m
  std::size_t pose_count() const { return per_pose.size(); }
};

/// Renders the map and the noise-free ground truth at every pose.
MetricsReport evaluate(const GaussianMap& map, const Scene& scene, std::span<const Pose> poses,
                       const SensorModel& model);

/// Rows pose,psnr_db,ssim,depth_rmse_m followed by a "mean" row.
void write_metrics_csv(std::ostream& out, const MetricsReport& report);

struct BenchRow {
  std::size_t gaussian_count = 0;
  std::size_t points_checked = 0;
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
  double speedup = 0.0;
  double serial_std_ms = 0.0;
  double parallel_std_ms = 0.0;
  double plan_ms = 0.0;
  double plan_std_ms = 0.0;
  bool identical = true;
};

/// For every size: a random map with a clear 5 m corridor, serial versus
/// data-parallel exhaustive collision checks of `points` points, and the
/// full plan call (hashed index build included). Times are mean and
/// standard deviation over `repeats`.
std::vector<BenchRow> bench_planner(std::span<const std::size_t> sizes, std::size_t points, int repeats,
                                    std::uint64_t seed = 1, std::size_t workers = 0);

/// Random benchmark map: Gaussians filling a 20 m square up to 2.5 m
/// height except a 3 m wide corridor along +x from the origin.
GaussianMap bench_map(std::size_t count, std::uint64_t seed);

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

}  // namespace gsx

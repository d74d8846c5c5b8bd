// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// Online map construction: densify from the current RGBD frame, refine with
// a fixed number of gradient steps, prune degenerate Gaussians, and keep the
// displacement ledger in sync with the map.

#pragma once

#include "gsx/ledger.hpp"
#include "gsx/render.hpp"
#include "gsx/splat.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace gsx {

/// Step sizes of the plain gradient-descent update, one per parameter group.
/// The loss is a per-pixel mean, so these are larger than typical
/// adaptive-optimizer rates.
struct LearningRates {
  double mean = 0.5;
  double color = 20.0;
  double opacity = 20.0;
  double radius = 0.5;
};

struct MapperConfig {
  int iterations_per_frame = 10;
  LearningRates rates;
  double prune_opacity_min = 0.005;
  double prune_radius_max = 1.0;  // meters
  int densify_stride = 4;         // pixels
  double densify_alpha_max = 0.5;
  double densify_depth_err = 0.1;  // meters
  double new_opacity = 0.5;
  double min_radius = 1e-4;  // meters
  LossWeights loss;

  void validate() const;
};

struct UpdateStats {
  std::uint64_t frame = 0;
  std::size_t added = 0;
  std::size_t pruned = 0;
  double loss = 0.0;
  std::size_t gaussian_count = 0;
  double wall_ms = 0.0;
};

/// Back-projects every densify_stride-th pixel the current map fails to
/// explain (low rendered opacity or large depth error) into a new Gaussian
/// with a newborn ledger entry. Returns the number added.
std::size_t densify(GaussianMap& map, UncertaintyLedger& ledger, const Frame& observed, const Pose& pose,
                    const CameraIntrinsics& intr, const MapperConfig& cfg, std::uint64_t frame_index);

/// Runs cfg.iterations_per_frame gradient steps against one frame and records
/// the mean displacement of every Gaussian that moved. Returns the loss of the
/// final map. `history`, when given, receives the loss before each step.
/// Throws std::runtime_error if the loss stays non-finite after one retry at
/// half the step sizes.
double optimize(GaussianMap& map, const Frame& observed, const Pose& pose, const CameraIntrinsics& intr,
                const MapperConfig& cfg, UncertaintyLedger& ledger, std::uint64_t frame_index,
                std::vector<double>* history = nullptr);

/// Removes Gaussians with opacity below prune_opacity_min or radius above
/// prune_radius_max and retires their ledger entries.
std::size_t prune(GaussianMap& map, const MapperConfig& cfg, UncertaintyLedger& ledger);

/// densify, then optimize, then prune.
UpdateStats map_update(GaussianMap& map, UncertaintyLedger& ledger, const Frame& observed, const Pose& pose,
                       const CameraIntrinsics& intr, const MapperConfig& cfg, std::uint64_t frame_index);

void write_update_header(std::ostream& out);
void write_update_row(std::ostream& out, const UpdateStats& stats);

}  // namespace gsx

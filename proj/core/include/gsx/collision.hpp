// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsx/splat.hpp"

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace gsx {

struct CollisionParams {
  double robot_radius = 0.3;  // meters
  double lambda_g = 3.0;      // Gaussian radius inflation
  double ground_z = 0.05;     // Gaussians at or below are ignored
};

enum class Broadphase { kSpatialHash, kNone };

/// Immutable collision view of a map snapshot. A point p is free iff
/// |p - mean| >= robot_radius + lambda_g * radius for every Gaussian above
/// the ground filter.
class CollisionIndex {
 public:
  CollisionIndex() = default;
  CollisionIndex(const GaussianMap& map, const CollisionParams& params,
                 Broadphase broadphase = Broadphase::kSpatialHash);

  bool is_free(const Vec3& p) const;
  std::size_t gaussian_count() const { return means_.size(); }
  /// Hash cell side: robot_radius + lambda_g * largest radius.
  double padding() const { return padding_; }
  Broadphase broadphase() const { return broadphase_; }

 private:
  std::uint64_t cell_of(const Vec3& p) const;

  Broadphase broadphase_ = Broadphase::kNone;
  double padding_ = 0.0;
  std::vector<Vec3> means_;    // grouped by cell when hashed
  std::vector<double> gamma_;  // squared clearance per Gaussian
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> cells_;
};

/// Per-point verdicts, 1 = free. Data-parallel over points; `workers` 0 uses
/// the process default, 1 forces the serial path.
std::vector<std::uint8_t> collision_check(std::span<const Vec3> points, const CollisionIndex& index,
                                          std::size_t workers = 0);

/// Planar points lifted to height z.
std::vector<std::uint8_t> collision_check(std::span<const Vec2> points, double z, const CollisionIndex& index,
                                          std::size_t workers = 0);

}  // namespace gsx

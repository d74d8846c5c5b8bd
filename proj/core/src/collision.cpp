// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/collision.hpp"

#include "gsx/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gsx {
namespace {

constexpr std::uint64_t kAxisBits = 21;
constexpr std::int64_t kAxisBias = 1 << 20;

std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
  const auto enc = [](std::int64_t v) {
    return static_cast<std::uint64_t>(std::clamp<std::int64_t>(v + kAxisBias, 0, (1 << kAxisBits) - 1));
  };
  return enc(x) | (enc(y) << kAxisBits) | (enc(z) << (2 * kAxisBits));
}

}  // namespace

CollisionIndex::CollisionIndex(const GaussianMap& map, const CollisionParams& params, Broadphase broadphase)
    : broadphase_(broadphase) {
  std::vector<Vec3> means;
  std::vector<double> gamma;
  double max_radius = 0.0;
  for (const Gaussian& g : map.gaussians()) {
    if (g.mean.z() <= params.ground_z) continue;
    const double clearance = params.robot_radius + params.lambda_g * g.radius;
    means.push_back(g.mean);
    gamma.push_back(clearance * clearance);
    max_radius = std::max(max_radius, g.radius);
  }
  padding_ = params.robot_radius + params.lambda_g * max_radius;

  if (broadphase_ == Broadphase::kNone || means.empty() || padding_ <= 0.0) {
    broadphase_ = Broadphase::kNone;
    means_ = std::move(means);
    gamma_ = std::move(gamma);
    return;
  }

  std::vector<std::uint64_t> keys(means.size());
  parallel_for(means.size(), [&](std::size_t i) { keys[i] = cell_of(means[i]); });
  std::vector<std::uint32_t> order(means.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return keys[a] != keys[b] ? keys[a] < keys[b] : a < b;
  });
  means_.resize(means.size());
  gamma_.resize(means.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    means_[k] = means[order[k]];
    gamma_[k] = gamma[order[k]];
  }
  cells_.reserve(order.size() / 4 + 1);
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin;
    while (end < order.size() && keys[order[end]] == keys[order[begin]]) ++end;
    cells_.emplace(keys[order[begin]],
                   std::pair{static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end)});
    begin = end;
  }
}

std::uint64_t CollisionIndex::cell_of(const Vec3& p) const {
  return pack(static_cast<std::int64_t>(std::floor(p.x() / padding_)),
              static_cast<std::int64_t>(std::floor(p.y() / padding_)),
              static_cast<std::int64_t>(std::floor(p.z() / padding_)));
}

bool CollisionIndex::is_free(const Vec3& p) const {
  const auto clear_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if ((p - means_[i]).squaredNorm() < gamma_[i]) return false;
    }
    return true;
  };
  if (broadphase_ == Broadphase::kNone) return clear_range(0, means_.size());

  const auto cx = static_cast<std::int64_t>(std::floor(p.x() / padding_));
  const auto cy = static_cast<std::int64_t>(std::floor(p.y() / padding_));
  const auto cz = static_cast<std::int64_t>(std::floor(p.z() / padding_));
  for (std::int64_t dz = -1; dz <= 1; ++dz) {
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        const auto it = cells_.find(pack(cx + dx, cy + dy, cz + dz));
        if (it == cells_.end()) continue;
        if (!clear_range(it->second.first, it->second.second)) return false;
      }
    }
  }
  return true;
}

std::vector<std::uint8_t> collision_check(std::span<const Vec3> points, const CollisionIndex& index,
                                          std::size_t workers) {
  std::vector<std::uint8_t> free(points.size(), 0);
  parallel_for(points.size(), [&](std::size_t i) { free[i] = index.is_free(points[i]) ? 1 : 0; }, workers);
  return free;
}

std::vector<std::uint8_t> collision_check(std::span<const Vec2> points, double z, const CollisionIndex& index,
                                          std::size_t workers) {
  std::vector<Vec3> lifted(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) lifted[i] = {points[i].x(), points[i].y(), z};
  return collision_check(lifted, index, workers);
}

}  // namespace gsx

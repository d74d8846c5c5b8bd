// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// Differentiable splat rasterizer: projection, front-to-back compositing of
// color/depth/opacity, the photometric-geometric loss and its analytic
// gradient with respect to every Gaussian parameter.

#pragma once

#include "gsx/splat.hpp"

#include <optional>
#include <span>
#include <vector>

namespace gsx {

/// Gaussians at or in front of this camera depth are culled.
inline constexpr double kNearPlane = 0.01;
/// Pixel support of a splat, in projected radii. The skipped tail weighs at
/// most opacity * exp(-8).
inline constexpr double kSupportRadii = 4.0;
/// Pixels whose rendered opacity is below this never carry a depth loss.
inline constexpr double kDepthLossMinAlpha = 0.02;
/// Side of the square pixel tiles used for bucketing.
inline constexpr int kTileSize = 8;

struct ProjectedGaussian {
  Vec2 mu2d = Vec2::Zero();  // pixels
  double r2d = 0.0;          // pixels
  double depth = 0.0;        // meters along the optical axis
  GaussianId source_id = 0;
};

std::optional<ProjectedGaussian> project(const Gaussian& g, GaussianId id, const Pose& pose,
                                         const CameraIntrinsics& intr);

/// Composites every Gaussian of the map, sorted by (depth, id). Pixel (x, y)
/// sits at image coordinate (x, y). Pixels with no contribution keep black
/// color, zero opacity and an invalid depth.
Frame render(const GaussianMap& map, const Pose& pose, const CameraIntrinsics& intr);

struct LossWeights {
  double lambda1 = 0.4;  // color L1
  double lambda2 = 0.1;  // 1 - SSIM
};

/// Mean over all pixels of |depth error| + lambda1 * mean-channel |color error|,
/// plus lambda2 * (1 - SSIM). The depth term only counts where the observed
/// depth is valid and the rendered opacity reaches kDepthLossMinAlpha.
/// Throws std::invalid_argument on a size mismatch.
double loss(const Frame& rendered, const Frame& observed, const LossWeights& weights = {});

/// Mean SSIM over 11x11 Gaussian windows (sigma 1.5), averaged over channels.
/// Windows are clipped at the image border and renormalized.
double ssim(std::span<const double> a, std::span<const double> b, int width, int height, int channels);

/// Same as ssim(); also writes d(ssim)/d(a) into grad_a (same layout as a).
double ssim_with_gradient(std::span<const double> a, std::span<const double> b, int width, int height,
                          int channels, std::span<double> grad_a);

/// Per-Gaussian loss gradients aligned with the map's storage order.
struct Gradients {
  std::vector<Vec3> color;
  std::vector<Vec3> mean;
  std::vector<double> radius;
  std::vector<double> opacity;
  double loss = 0.0;
  Frame rendered;

  double squared_norm() const;
};

Gradients backward(const GaussianMap& map, const Pose& pose, const CameraIntrinsics& intr,
                   const Frame& observed, const LossWeights& weights = {});

}  // namespace gsx

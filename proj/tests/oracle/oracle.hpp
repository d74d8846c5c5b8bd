// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// Slow reference implementations used only by tests. None of these call into
// the optimized code paths they are compared against.

#pragma once

#include "gsx/collision.hpp"
#include "gsx/info_gain.hpp"
#include "gsx/local_planner.hpp"
#include "gsx/render.hpp"
#include "gsx/splat.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace gsx::oracle {

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double r2d = 0.0;
  double depth = 0.0;
};

/// Pinhole projection written out from K [R^T (mu - t)].
std::optional<Projection> project(const Gaussian& g, const Pose& pose, const CameraIntrinsics& intr);

/// Per-pixel compositing over every Gaussian, sorted by (depth, id). With
/// cutoff=false every Gaussian contributes to every pixel.
Frame composite(const GaussianMap& map, const Pose& pose, const CameraIntrinsics& intr, bool cutoff);

/// Mean SSIM with explicit 11x11 window sums per pixel, clipped and
/// renormalized at the border, sigma 1.5, C1 = 0.01^2, C2 = 0.03^2.
double ssim(const std::vector<double>& a, const std::vector<double>& b, int w, int h, int channels);

/// Loss recomputed from scratch (brute-force compositor with cutoff plus the
/// reference SSIM).
double loss(const GaussianMap& map, const Pose& pose, const CameraIntrinsics& intr, const Frame& observed,
            double lambda1 = 0.4, double lambda2 = 0.1);

/// Every discrete choice the loss makes: which pixels each Gaussian touches,
/// the depth order, the depth mask and the sign of every residual. Finite
/// differences are only meaningful when this is constant over the stencil.
std::vector<std::int64_t> signature(const GaussianMap& map, const Pose& pose, const CameraIntrinsics& intr,
                                    const Frame& observed);

struct GradientCheck {
  std::size_t components = 0;  // 8 per Gaussian
  std::size_t compared = 0;
  std::size_t excluded = 0;    // stencil crosses a discrete change of the loss
  std::size_t failures = 0;
  double max_rel_error = 0.0;  // over compared components above abs_tol
  double max_abs_error = 0.0;
  double max_gradient = 0.0;   // largest |analytic| among compared components
  double loss_mismatch = 0.0;  // |backward loss - reference loss|
};

/// Central differences of loss() for every parameter of every Gaussian of a
/// random scene, compared with backward(). A component passes when the
/// relative error is below rel_tol or the absolute error below abs_tol.
GradientCheck check_gradients(std::uint64_t seed, int gaussians, int size, double h = 1e-4,
                              double rel_tol = 1e-3, double abs_tol = 1e-6);

/// Dense Tr(J S J^T) for J the |visible| x N selection matrix.
double dense_trace(const std::vector<bool>& visible, const std::vector<double>& variances);

bool frustum_visible(const Vec3& mean, const Pose& pose, const CameraIntrinsics& intr, double range);

/// All-pairs gamma rule.
bool is_free(const Vec3& p, const GaussianMap& map, const CollisionParams& params);

/// Unicycle flow by RK4 over `steps` substeps.
RobotState integrate(const RobotState& x, const ControlInput& u, double dt, int steps = 2000);

/// Exhaustive depth-bounded search over the primitive tree. Returns the
/// smallest summed cost of any primitive sequence that ends inside the goal
/// ball without colliding, or nullopt when none exists.
std::optional<double> astar_cost(const RobotState& start, const Vec2& goal, const PlannerConfig& cfg,
                                 const GaussianMap& map);

/// Omega per cell by grouping the map by floor(p - origin / cell).
std::map<CellKey, double> group_omega(const GaussianMap& map, const std::vector<double>& displacements,
                                      const Vec3& origin, double cell, double ground_z);

double psnr(const std::vector<double>& a, const std::vector<double>& b);

/// Random scene helpers shared by tests and the acceptance binary.
GaussianMap random_map(std::mt19937_64& rng, int count, double z_min, double z_max, double spread,
                       double r_min, double r_max);
Frame random_observation(std::mt19937_64& rng, int w, int h, double invalid_fraction);
CameraIntrinsics small_intrinsics(int w, int h);

}  // namespace gsx::oracle

// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// Scene representation shared by the mapper, the planners and the simulator:
// isotropic Gaussians, pinhole intrinsics, camera poses and RGBD frames.

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gsx {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

using GaussianId = std::uint64_t;

/// Isotropic splat. Eight scalars: color, mean, radius, opacity.
struct Gaussian {
  Vec3 color = Vec3::Zero();  // RGB in [0, 1]
  Vec3 mean = Vec3::Zero();   // world frame, meters
  double radius = 0.1;        // meters, > 0
  double opacity = 1.0;       // [0, 1]
};

/// Ordered Gaussian collection with stable identifiers.
///
/// Identifiers are assigned from a monotone counter and never reused, so the
/// storage order is always sorted by id. Lookups by id are binary searches.
class GaussianMap {
 public:
  GaussianId add(const Gaussian& g);

  /// Inserts with an explicit id (map import). Ids must arrive strictly
  /// increasing and above every retired id.
  void insert_with_id(GaussianId id, const Gaussian& g);

  std::size_t size() const { return gaussians_.size(); }
  bool empty() const { return gaussians_.empty(); }

  const std::vector<Gaussian>& gaussians() const { return gaussians_; }
  std::vector<Gaussian>& mutable_gaussians() { return gaussians_; }
  const std::vector<GaussianId>& ids() const { return ids_; }

  const Gaussian& operator[](std::size_t index) const { return gaussians_[index]; }
  Gaussian& operator[](std::size_t index) { return gaussians_[index]; }

  std::optional<std::size_t> index_of(GaussianId id) const;

  /// Removes every Gaussian for which pred(id, gaussian) holds. Returns the
  /// retired ids in ascending order.
  template <class Pred>
  std::vector<GaussianId> remove_if(Pred&& pred) {
    std::vector<GaussianId> retired;
    std::size_t out = 0;
    for (std::size_t i = 0; i < gaussians_.size(); ++i) {
      if (pred(ids_[i], gaussians_[i])) {
        retired.push_back(ids_[i]);
        continue;
      }
      gaussians_[out] = gaussians_[i];
      ids_[out] = ids_[i];
      ++out;
    }
    gaussians_.resize(out);
    ids_.resize(out);
    if (!retired.empty()) ++generation_;
    return retired;
  }

  GaussianId next_id() const { return next_id_; }
  std::uint64_t generation() const { return generation_; }
  void bump_generation() { ++generation_; }

 private:
  std::vector<Gaussian> gaussians_;
  std::vector<GaussianId> ids_;
  GaussianId next_id_ = 0;
  std::uint64_t generation_ = 0;
};

struct CameraIntrinsics {
  double fx = 32.0;
  double fy = 32.0;
  double cx = 32.0;
  double cy = 32.0;
  int width = 64;
  int height = 64;
  double max_range = 5.0;

  /// Single focal length used for projected radii.
  double focal() const { return 0.5 * (fx + fy); }
  double hfov() const;
  double vfov() const;
  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
};

/// World-from-camera transform. Camera axes follow the pinhole convention:
/// +z forward, +x right, +y down.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose from_quaternion(const Vec3& t, double qw, double qx, double qy, double qz);
  /// Camera-frame coordinates of a world point.
  Vec3 to_camera(const Vec3& world) const { return rotation.transpose() * (world - translation); }
  bool is_valid(double tol = 1e-9) const;
};

inline constexpr double kInvalidDepth = -1.0;
inline bool is_valid_depth(double d) { return d > 0.0; }

/// Row-major RGBD image with accumulated opacity.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<double> color;  // height * width * 3
  std::vector<double> depth;  // height * width, kInvalidDepth marks no return
  std::vector<double> alpha;  // height * width

  Frame() = default;
  Frame(int w, int h);

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t pixel(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  Vec3 rgb(std::size_t p) const { return {color[3 * p], color[3 * p + 1], color[3 * p + 2]}; }
};

}  // namespace gsx

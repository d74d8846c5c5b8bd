// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/splat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gsx {

GaussianId GaussianMap::add(const Gaussian& g) {
  const GaussianId id = next_id_++;
  gaussians_.push_back(g);
  ids_.push_back(id);
  ++generation_;
  return id;
}

void GaussianMap::insert_with_id(GaussianId id, const Gaussian& g) {
  if (id < next_id_) {
    throw std::invalid_argument("GaussianMap: id " + std::to_string(id) + " is not above every used id");
  }
  gaussians_.push_back(g);
  ids_.push_back(id);
  next_id_ = id + 1;
  ++generation_;
}

std::optional<std::size_t> GaussianMap::index_of(GaussianId id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

double CameraIntrinsics::hfov() const { return 2.0 * std::atan(0.5 * width / fx); }
double CameraIntrinsics::vfov() const { return 2.0 * std::atan(0.5 * height / fy); }

void CameraIntrinsics::validate() const {
  if (!(fx > 0 && fy > 0)) throw std::invalid_argument("intrinsics: focal lengths must be positive");
  if (width <= 0 || height <= 0) throw std::invalid_argument("intrinsics: image size must be positive");
  if (!(cx > 0 && cx < width && cy > 0 && cy < height)) {
    throw std::invalid_argument("intrinsics: principal point must lie inside the image");
  }
  if (!(max_range > 0)) throw std::invalid_argument("intrinsics: max_range must be positive");
}

Pose Pose::from_quaternion(const Vec3& t, double qw, double qx, double qy, double qz) {
  Eigen::Quaterniond q(qw, qx, qy, qz);
  if (q.norm() < 1e-12) throw std::invalid_argument("pose: zero quaternion");
  q.normalize();
  Pose pose;
  pose.rotation = q.toRotationMatrix();
  pose.translation = t;
  return pose;
}

bool Pose::is_valid(double tol) const {
  const Mat3 should_be_identity = rotation.transpose() * rotation;
  return (should_be_identity - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(rotation.determinant() - 1.0) <= tol && translation.allFinite();
}

Frame::Frame(int w, int h)
    : width(w),
      height(h),
      color(static_cast<std::size_t>(w) * h * 3, 0.0),
      depth(static_cast<std::size_t>(w) * h, kInvalidDepth),
      alpha(static_cast<std::size_t>(w) * h, 0.0) {}

}  // namespace gsx

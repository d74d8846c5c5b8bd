// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/scene.hpp"

#include "gsx/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gsx {
namespace {

Vec3 hsv_to_rgb(double h, double s, double v) {
  const double c = v * s;
  const double hp = std::fmod(h, 1.0) * 6.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  Vec3 rgb;
  if (hp < 1) rgb = {c, x, 0};
  else if (hp < 2) rgb = {x, c, 0};
  else if (hp < 3) rgb = {0, c, x};
  else if (hp < 4) rgb = {0, x, c};
  else if (hp < 5) rgb = {x, 0, c};
  else rgb = {c, 0, x};
  return rgb + Vec3::Constant(v - c);
}

class Builder {
 public:
  Builder(double density, std::uint64_t seed) : rng_(seed) {
    if (density > 0) spacing_ = 1.0 / std::sqrt(density);
  }

  std::mt19937_64& rng() { return rng_; }

  /// Rectangle o + s*u + t*v for s in [0, a], t in [0, b], u and v unit.
  void sheet(const Vec3& o, const Vec3& u, double a, const Vec3& v, double b) {
    if (spacing_ <= 0 || a <= 0 || b <= 0) return;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Vec3 hue = hsv_to_rgb(unit(rng_), 0.35 + 0.45 * unit(rng_), 0.55 + 0.35 * unit(rng_));
    const int nu = std::max(1, static_cast<int>(std::ceil(a / spacing_)));
    const int nv = std::max(1, static_cast<int>(std::ceil(b / spacing_)));
    const double su = a / nu;
    const double sv = b / nv;
    for (int j = 0; j < nv; ++j) {
      for (int i = 0; i < nu; ++i) {
        Gaussian g;
        g.mean = o + (i + 0.5) * su * u + (j + 0.5) * sv * v;
        g.radius = spacing_;
        g.opacity = 0.95;
        const bool checker = ((static_cast<int>((i + 0.5) * su / 0.5) + static_cast<int>((j + 0.5) * sv / 0.5)) & 1) != 0;
        const double shade = (checker ? 0.7 : 1.0) * (0.9 + 0.1 * unit(rng_));
        g.color = (hue * shade).cwiseMax(0.0).cwiseMin(1.0);
        map_.add(g);
      }
    }
  }

  /// Vertical wall along the segment a-b from the floor to height.
  void wall(const Vec2& a, const Vec2& b, double height) {
    const Vec2 d = b - a;
    const double len = d.norm();
    if (len <= 0) return;
    sheet({a.x(), a.y(), 0.0}, Vec3(d.x() / len, d.y() / len, 0.0), len, Vec3::UnitZ(), height);
  }

  /// Wall with a full-height gap of `door` meters starting `offset` from a.
  void wall_with_door(const Vec2& a, const Vec2& b, double height, double offset, double door) {
    const Vec2 dir = (b - a).normalized();
    const double len = (b - a).norm();
    offset = std::clamp(offset, 0.0, std::max(0.0, len - door));
    wall(a, a + dir * offset, height);
    wall(a + dir * std::min(len, offset + door), b, height);
  }

  /// Axis-aligned box of Gaussian faces (sides and top).
  void box(const Vec2& lo, const Vec2& hi, double height) {
    wall({lo.x(), lo.y()}, {hi.x(), lo.y()}, height);
    wall({hi.x(), lo.y()}, {hi.x(), hi.y()}, height);
    wall({hi.x(), hi.y()}, {lo.x(), hi.y()}, height);
    wall({lo.x(), hi.y()}, {lo.x(), lo.y()}, height);
    sheet({lo.x(), lo.y(), height}, Vec3::UnitX(), hi.x() - lo.x(), Vec3::UnitY(), hi.y() - lo.y());
  }

  void enclosure(const Vec2& extent, double height) {
    sheet(Vec3::Zero(), Vec3::UnitX(), extent.x(), Vec3::UnitY(), extent.y());
    sheet({0, 0, height}, Vec3::UnitX(), extent.x(), Vec3::UnitY(), extent.y());
    wall({0, 0}, {extent.x(), 0}, height);
    wall({extent.x(), 0}, {extent.x(), extent.y()}, height);
    wall({extent.x(), extent.y()}, {0, extent.y()}, height);
    wall({0, extent.y()}, {0, 0}, height);
  }

  GaussianMap take() { return std::move(map_); }

 private:
  std::mt19937_64 rng_;
  double spacing_ = 0.0;
  GaussianMap map_;
};

constexpr double kDoorWidth = 2.6;   // meters
constexpr double kRoomSide = 6.0;    // nominal room side, meters

}  // namespace

std::string_view to_string(SceneKind kind) {
  switch (kind) {
    case SceneKind::kRooms: return "rooms";
    case SceneKind::kCorridor: return "corridor";
    case SceneKind::kClutter: return "clutter";
  }
  return "rooms";
}

SceneKind parse_scene_kind(std::string_view name) {
  if (name == "rooms") return SceneKind::kRooms;
  if (name == "corridor") return SceneKind::kCorridor;
  if (name == "clutter") return SceneKind::kClutter;
  throw std::invalid_argument("unknown scene kind '" + std::string(name) + "'");
}

bool Aabb::contains_xy(const Vec2& p, double margin) const {
  return p.x() >= min.x() + margin && p.x() <= max.x() - margin && p.y() >= min.y() + margin &&
         p.y() <= max.y() - margin;
}

Scene generate_scene(const SceneSpec& spec, const CollisionParams& collision, double robot_z) {
  if (!(spec.extent.x() > 0 && spec.extent.y() > 0 && spec.height > 0)) {
    throw std::invalid_argument("scene: extent and height must be positive");
  }
  if (!(spec.density >= 0)) throw std::invalid_argument("scene: density must be >= 0");

  Builder b(spec.density, spec.seed);
  const Vec2 ext = spec.extent;
  Vec2 spawn_xy = 0.5 * ext;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  switch (spec.kind) {
    case SceneKind::kRooms: {
      b.enclosure(ext, spec.height);
      const int cols = std::max(1, static_cast<int>(std::lround(ext.x() / kRoomSide)));
      const int rows = std::max(1, static_cast<int>(std::lround(ext.y() / kRoomSide)));
      const double w = ext.x() / cols;
      const double h = ext.y() / rows;
      // Interior walls split into one segment per room, each with a door.
      for (int c = 1; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
          const double off = 0.6 + unit(b.rng()) * std::max(0.0, h - kDoorWidth - 1.2);
          b.wall_with_door({c * w, r * h}, {c * w, (r + 1) * h}, spec.height, off, kDoorWidth);
        }
      }
      for (int r = 1; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          const double off = 0.6 + unit(b.rng()) * std::max(0.0, w - kDoorWidth - 1.2);
          b.wall_with_door({c * w, r * h}, {(c + 1) * w, r * h}, spec.height, off, kDoorWidth);
        }
      }
      spawn_xy = {0.5 * w, 0.5 * h};
      break;
    }
    case SceneKind::kCorridor: {
      b.enclosure(ext, spec.height);
      const double y0 = 0.5 * (ext.y() - spec.corridor_width);
      const double y1 = 0.5 * (ext.y() + spec.corridor_width);
      if (y0 > 0) {
        b.wall({0, y0}, {ext.x(), y0}, spec.height);
        b.wall({0, y1}, {ext.x(), y1}, spec.height);
      }
      spawn_xy = {std::min(1.5, 0.5 * ext.x()), 0.5 * ext.y()};
      break;
    }
    case SceneKind::kClutter: {
      b.enclosure(ext, spec.height);
      const int count = std::max(1, static_cast<int>(ext.x() * ext.y() / 16.0));
      for (int k = 0; k < count; ++k) {
        const Vec2 size(0.4 + 0.8 * unit(b.rng()), 0.4 + 0.8 * unit(b.rng()));
        const Vec2 lo(1.5 + unit(b.rng()) * std::max(0.0, ext.x() - 3.0 - size.x()),
                      1.5 + unit(b.rng()) * std::max(0.0, ext.y() - 3.0 - size.y()));
        // Keep the middle clear for the spawn.
        if ((lo + 0.5 * size - 0.5 * ext).norm() < 2.0) continue;
        b.box(lo, lo + size, 0.5 + (spec.height - 0.5) * unit(b.rng()));
      }
      break;
    }
  }

  Scene scene;
  scene.gt_map = b.take();
  scene.bounds.min = Vec3::Zero();
  scene.bounds.max = Vec3(ext.x(), ext.y(), spec.height);
  scene.ground_z = collision.ground_z;
  scene.spawn.p = spawn_xy;
  scene.spawn.theta = 0.0;
  if (!gt_is_free(scene, scene.spawn.p, robot_z, collision)) {
    std::mt19937_64 rng(spec.seed ^ 0x5eedULL);
    scene.spawn = sample_free_state(scene, rng, collision, robot_z);
  }
  return scene;
}

bool gt_is_free(const Scene& scene, const Vec2& p, double z, const CollisionParams& params) {
  const Vec3 q(p.x(), p.y(), z);
  for (const Gaussian& g : scene.gt_map.gaussians()) {
    if (g.mean.z() <= params.ground_z) continue;
    if ((q - g.mean).norm() < params.robot_radius + params.lambda_g * g.radius) return false;
  }
  return true;
}

RobotState sample_free_state(const Scene& scene, std::mt19937_64& rng, const CollisionParams& params,
                             double robot_z, double margin) {
  CollisionParams padded = params;
  padded.robot_radius += margin;
  const CollisionIndex index(scene.gt_map, padded);
  std::uniform_real_distribution<double> ux(scene.bounds.min.x(), scene.bounds.max.x());
  std::uniform_real_distribution<double> uy(scene.bounds.min.y(), scene.bounds.max.y());
  std::uniform_real_distribution<double> uth(-std::numbers::pi, std::numbers::pi);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Vec2 p(ux(rng), uy(rng));
    const double theta = wrap_angle(uth(rng));
    if (!scene.bounds.contains_xy(p, params.robot_radius + margin)) continue;
    if (index.is_free({p.x(), p.y(), robot_z})) return {p, theta};
  }
  throw std::runtime_error("scene: no free pose found");
}

void SensorModel::validate() const {
  intr.validate();
  if (!(max_range > 0)) throw std::invalid_argument("sensor: max_range must be positive");
  if (!(depth_noise_sigma >= 0)) throw std::invalid_argument("sensor: depth noise sigma must be >= 0");
}

Frame sense(const Scene& scene, const Pose& pose, const SensorModel& model, std::mt19937_64* rng) {
  Frame frame = render(scene.gt_map, pose, model.intr);
  for (double& d : frame.depth) {
    if (is_valid_depth(d) && d > model.max_range) d = kInvalidDepth;
  }
  if (model.depth_noise_sigma > 0) {
    if (rng == nullptr) throw std::invalid_argument("sense: noise requires an RNG");
    std::normal_distribution<double> noise(0.0, model.depth_noise_sigma);
    for (double& d : frame.depth) {
      if (!is_valid_depth(d)) continue;
      d = std::clamp(d + noise(*rng), 1e-3, model.max_range);
    }
  }
  return frame;
}

}  // namespace gsx

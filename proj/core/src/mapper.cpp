// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/mapper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace gsx {

// ---- ledger ----------------------------------------------------------------

void UncertaintyLedger::add_newborn(GaussianId id, std::uint64_t frame) {
  entries_[id] = LedgerEntry{kNewbornDisplacement, frame};
}

void UncertaintyLedger::set(GaussianId id, double displacement, std::uint64_t frame) {
  if (!(displacement >= 0.0)) throw std::invalid_argument("ledger: displacement must be >= 0");
  entries_[id] = LedgerEntry{displacement, frame};
}

void UncertaintyLedger::retire(std::span<const GaussianId> ids) {
  for (const GaussianId id : ids) entries_.erase(id);
}

const LedgerEntry& UncertaintyLedger::at(GaussianId id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end()) throw std::out_of_range("ledger: unknown Gaussian id " + std::to_string(id));
  return it->second;
}

std::vector<GaussianId> UncertaintyLedger::ids() const {
  std::vector<GaussianId> out;
  out.reserve(entries_.size());
  for (const auto& [id, entry] : entries_) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> UncertaintyLedger::displacements(const GaussianMap& map) const {
  std::vector<double> out(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) out[i] = at(map.ids()[i]).displacement;
  return out;
}

// ---- mapper ----------------------------------------------------------------

void MapperConfig::validate() const {
  if (iterations_per_frame < 1) throw std::invalid_argument("mapper: iterations_per_frame must be >= 1");
  if (!(rates.mean > 0 && rates.color > 0 && rates.opacity > 0 && rates.radius > 0)) {
    throw std::invalid_argument("mapper: learning rates must be positive");
  }
  if (densify_stride < 1) throw std::invalid_argument("mapper: densify_stride must be >= 1");
}

std::size_t densify(GaussianMap& map, UncertaintyLedger& ledger, const Frame& observed, const Pose& pose,
                    const CameraIntrinsics& intr, const MapperConfig& cfg, std::uint64_t frame_index) {
  const Frame rendered = render(map, pose, intr);
  const int stride = cfg.densify_stride;
  const double f = intr.focal();
  std::size_t added = 0;
  for (int y = stride / 2; y < observed.height; y += stride) {
    for (int x = stride / 2; x < observed.width; x += stride) {
      const std::size_t p = observed.pixel(x, y);
      const double z = observed.depth[p];
      if (!is_valid_depth(z)) continue;
      const bool sparse = rendered.alpha[p] < cfg.densify_alpha_max;
      const bool wrong_depth =
          !is_valid_depth(rendered.depth[p]) || std::abs(rendered.depth[p] - z) > cfg.densify_depth_err;
      if (!sparse && !wrong_depth) continue;

      const Vec3 cam((x - intr.cx) * z / intr.fx, (y - intr.cy) * z / intr.fy, z);
      Gaussian g;
      g.mean = pose.rotation * cam + pose.translation;
      g.color = observed.rgb(p).cwiseMax(0.0).cwiseMin(1.0);
      g.opacity = cfg.new_opacity;
      g.radius = z / f * stride / 2.0;
      ledger.add_newborn(map.add(g), frame_index);
      ++added;
    }
  }
  return added;
}

namespace {

bool finite_params(const GaussianMap& map) {
  for (const Gaussian& g : map.gaussians()) {
    if (!g.mean.allFinite() || !g.color.allFinite() || !std::isfinite(g.radius) || !std::isfinite(g.opacity)) {
      return false;
    }
  }
  return true;
}

void apply_step(GaussianMap& map, const Gradients& grads, const LearningRates& lr, double min_radius) {
  auto& gs = map.mutable_gaussians();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    Gaussian& g = gs[i];
    g.mean -= lr.mean * grads.mean[i];
    g.color = (g.color - lr.color * grads.color[i]).cwiseMax(0.0).cwiseMin(1.0);
    g.opacity = std::clamp(g.opacity - lr.opacity * grads.opacity[i], 0.0, 1.0);
    g.radius = std::max(min_radius, g.radius - lr.radius * grads.radius[i]);
  }
}

}  // namespace

double optimize(GaussianMap& map, const Frame& observed, const Pose& pose, const CameraIntrinsics& intr,
                const MapperConfig& cfg, UncertaintyLedger& ledger, std::uint64_t frame_index,
                std::vector<double>* history) {
  cfg.validate();
  if (map.empty()) return loss(render(map, pose, intr), observed, cfg.loss);

  std::vector<Vec3> before(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) before[i] = map[i].mean;

  LearningRates rates = cfg.rates;
  bool retried = false;
  for (int it = 0; it < cfg.iterations_per_frame; ++it) {
    const std::vector<Gaussian> saved = map.gaussians();
    Gradients grads = backward(map, pose, intr, observed, cfg.loss);
    if (history) history->push_back(grads.loss);
    apply_step(map, grads, rates, cfg.min_radius);
    if (std::isfinite(grads.loss) && finite_params(map)) continue;

    map.mutable_gaussians() = saved;
    if (retried) throw std::runtime_error("optimize: loss is not finite after retrying at half step size");
    retried = true;
    rates.mean *= 0.5;
    rates.color *= 0.5;
    rates.opacity *= 0.5;
    rates.radius *= 0.5;
    --it;
    if (history) history->pop_back();
  }

  for (std::size_t i = 0; i < map.size(); ++i) {
    const Vec3 delta = map[i].mean - before[i];
    if (delta.isZero(0.0)) continue;
    ledger.set(map.ids()[i], delta.norm(), frame_index);
  }
  const double final_loss = loss(render(map, pose, intr), observed, cfg.loss);
  if (!std::isfinite(final_loss)) throw std::runtime_error("optimize: final loss is not finite");
  return final_loss;
}

std::size_t prune(GaussianMap& map, const MapperConfig& cfg, UncertaintyLedger& ledger) {
  const auto retired = map.remove_if([&](GaussianId, const Gaussian& g) {
    return g.opacity < cfg.prune_opacity_min || g.radius > cfg.prune_radius_max;
  });
  ledger.retire(retired);
  return retired.size();
}

UpdateStats map_update(GaussianMap& map, UncertaintyLedger& ledger, const Frame& observed, const Pose& pose,
                       const CameraIntrinsics& intr, const MapperConfig& cfg, std::uint64_t frame_index) {
  const auto start = std::chrono::steady_clock::now();
  UpdateStats stats;
  stats.frame = frame_index;
  stats.added = densify(map, ledger, observed, pose, intr, cfg, frame_index);
  stats.loss = optimize(map, observed, pose, intr, cfg, ledger, frame_index);
  stats.pruned = prune(map, cfg, ledger);
  stats.gaussian_count = map.size();
  stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

void write_update_header(std::ostream& out) { out << "frame,added,pruned,loss,gaussian_count,wall_ms\n"; }

void write_update_row(std::ostream& out, const UpdateStats& s) {
  out << s.frame << ',' << s.added << ',' << s.pruned << ',' << s.loss << ',' << s.gaussian_count << ','
      << s.wall_ms << '\n';
}

}  // namespace gsx

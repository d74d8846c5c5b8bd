// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/info_gain.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace gsx {

std::string_view to_string(VariantKind kind) {
  switch (kind) {
    case VariantKind::kStandard: return "standard";
    case VariantKind::kSum: return "sum";
    case VariantKind::kSquared: return "squared";
  }
  return "standard";
}

VariantKind parse_variant(std::string_view name) {
  if (name == "standard") return VariantKind::kStandard;
  if (name == "sum") return VariantKind::kSum;
  if (name == "squared") return VariantKind::kSquared;
  throw std::invalid_argument("unknown variant '" + std::string(name) + "' (standard|sum|squared)");
}

UncertaintyPartition classify_values(const GaussianMap& map, std::span<const double> values, double ground_z) {
  if (values.size() != map.size()) throw std::invalid_argument("classify: one value per Gaussian expected");
  UncertaintyPartition part;
  part.labels.assign(map.size(), UncertaintyClass::kIgnored);

  // Shifted accumulation so that equal inputs give exactly that mean.
  double pivot = 0.0;
  bool have_pivot = false;
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i].mean.z() <= ground_z || !std::isfinite(values[i])) continue;
    if (!have_pivot) {
      pivot = values[i];
      have_pivot = true;
    }
    const double d = values[i] - pivot;
    sum += d;
    sum_sq += d * d;
    ++n;
  }
  if (n > 0) {
    const double shift = sum / static_cast<double>(n);
    const double mean = pivot + shift;
    const double var = std::max(0.0, sum_sq / static_cast<double>(n) - shift * shift);
    const double sd = std::sqrt(var);
    part.tau_hi = mean + 0.5 * sd;
    part.tau_lo = mean - 0.5 * sd;
    part.thresholds_defined = true;
  }

  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i].mean.z() <= ground_z) continue;
    const double v = values[i];
    const GaussianId id = map.ids()[i];
    if (!std::isfinite(v) || (part.thresholds_defined && v > part.tau_hi)) {
      part.labels[i] = UncertaintyClass::kHigh;
      part.high.push_back(id);
    } else if (part.thresholds_defined && v < part.tau_lo) {
      part.labels[i] = UncertaintyClass::kLow;
      part.low.push_back(id);
    } else {
      part.labels[i] = UncertaintyClass::kOther;
      part.other.push_back(id);
    }
  }
  return part;
}

namespace {

std::vector<double> ledger_values(const GaussianMap& map, const UncertaintyLedger& ledger, bool squared) {
  std::vector<double> v = ledger.displacements(map);
  if (squared) {
    for (double& x : v) x = x * x;
  }
  return v;
}

}  // namespace

UncertaintyPartition classify(const GaussianMap& map, const UncertaintyLedger& ledger, double ground_z,
                              bool squared) {
  if (ledger.size() == 0 && !map.empty()) throw std::invalid_argument("classify: empty ledger");
  return classify_values(map, ledger_values(map, ledger, squared), ground_z);
}

CellKey RegionGrid::key_of(const Vec3& p) const {
  CellKey k{};
  for (int a = 0; a < 3; ++a) k[a] = static_cast<int>(std::floor((p[a] - origin[a]) / cell_size));
  return k;
}

std::vector<double> cap_newborns(std::span<const double> values) {
  double max_finite = -1.0;
  for (const double v : values) {
    if (std::isfinite(v)) max_finite = std::max(max_finite, v);
  }
  const double cap = max_finite >= 0.0 ? 2.0 * max_finite : 1.0;
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) {
    if (!std::isfinite(v)) v = cap;
  }
  return out;
}

void region_utilities(const GaussianMap& map, const UncertaintyLedger& ledger, RegionGrid& grid, double ground_z,
                      bool squared) {
  if (!(grid.cell_size > 0)) throw std::invalid_argument("region grid: cell_size must be positive");
  const std::vector<double> raw = ledger_values(map, ledger, squared);
  std::vector<double> above;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i].mean.z() > ground_z) above.push_back(raw[i]);
  }
  double max_finite = -1.0;
  for (const double v : above) {
    if (std::isfinite(v)) max_finite = std::max(max_finite, v);
  }
  const double newborn_value = max_finite >= 0.0 ? 2.0 * max_finite : 1.0;

  grid.cells.clear();
  std::map<CellKey, double> sums;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Gaussian& g = map[i];
    if (g.mean.z() <= ground_z) continue;
    const CellKey key = grid.key_of(g.mean);
    Region& r = grid.cells[key];
    r.members.push_back(map.ids()[i]);
    r.centroid += g.mean;
    sums[key] += std::isfinite(raw[i]) ? raw[i] : newborn_value;
  }
  for (auto& [key, r] : grid.cells) {
    const double m = static_cast<double>(r.members.size());
    r.centroid /= m;
    r.omega = sums[key] / m;
  }
}

void write_regions_csv(std::ostream& out, const RegionGrid& grid) {
  out << "ix,iy,iz,centroid_x,centroid_y,centroid_z,count,omega\n";
  for (const auto& [key, r] : grid.cells) {
    out << key[0] << ',' << key[1] << ',' << key[2] << ',' << r.centroid.x() << ',' << r.centroid.y() << ','
        << r.centroid.z() << ',' << r.members.size() << ',' << r.omega << '\n';
  }
}

bool is_visible(const Vec3& mean, const Pose& pose, const CameraIntrinsics& intr, double range) {
  const Vec3 pc = pose.to_camera(mean);
  const double d = pc.z();
  if (!(d > 0.0) || d > range) return false;
  const double u = intr.fx * pc.x() / d + intr.cx;
  const double v = intr.fy * pc.y() / d + intr.cy;
  return u >= -0.5 && u < intr.width - 0.5 && v >= -0.5 && v < intr.height - 0.5;
}

std::vector<GaussianId> visible_set(const Pose& pose, const CameraIntrinsics& intr, double range,
                                    const GaussianMap& map) {
  if (!(range > 0)) throw std::invalid_argument("visible_set: range must be positive");
  std::vector<GaussianId> out;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (is_visible(map[i].mean, pose, intr, range)) out.push_back(map.ids()[i]);
  }
  return out;
}

double viewpoint_utility(const Pose& pose, const UncertaintyPartition& partition, const GaussianMap& map,
                         const CameraIntrinsics& intr, double range, double lambda_xi) {
  if (partition.labels.size() != map.size()) throw std::invalid_argument("viewpoint_utility: stale partition");
  std::size_t high = 0, low = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const UncertaintyClass c = partition.labels[i];
    if (c != UncertaintyClass::kHigh && c != UncertaintyClass::kLow) continue;
    if (!is_visible(map[i].mean, pose, intr, range)) continue;
    (c == UncertaintyClass::kHigh ? high : low) += 1;
  }
  return static_cast<double>(high) - lambda_xi * static_cast<double>(low);
}

double trace_proxy(const Pose& pose, const CameraIntrinsics& intr, double range, const GaussianMap& map,
                   std::span<const double> variances) {
  if (variances.size() != map.size()) throw std::invalid_argument("trace_proxy: one variance per Gaussian expected");
  double trace = 0.0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (is_visible(map[i].mean, pose, intr, range)) trace += variances[i];
  }
  return trace;
}

ViewScorer::ViewScorer(const GaussianMap& map, const UncertaintyLedger& ledger, VariantKind kind,
                       const InfoConfig& info, const CameraIntrinsics& intr, double range)
    : kind_(kind),
      intr_(intr),
      range_(range),
      lambda_xi_(info.lambda_xi),
      partition_(classify(map, ledger, info.ground_z, kind == VariantKind::kSquared)) {
  if (kind == VariantKind::kSum) {
    const std::vector<double> capped = cap_newborns(ledger.displacements(map));
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (partition_.labels[i] == UncertaintyClass::kIgnored || capped[i] == 0.0) continue;
      means_.push_back(map[i].mean);
      weights_.push_back(capped[i]);
    }
    return;
  }
  for (std::size_t i = 0; i < map.size(); ++i) {
    const UncertaintyClass c = partition_.labels[i];
    if (c != UncertaintyClass::kHigh && c != UncertaintyClass::kLow) continue;
    means_.push_back(map[i].mean);
    is_high_.push_back(c == UncertaintyClass::kHigh ? 1 : 0);
  }
}

double ViewScorer::score(const Pose& pose) const {
  if (kind_ == VariantKind::kSum) {
    double total = 0.0;
    for (std::size_t i = 0; i < means_.size(); ++i) {
      if (is_visible(means_[i], pose, intr_, range_)) total += weights_[i];
    }
    return total;
  }
  std::size_t high = 0, low = 0;
  for (std::size_t i = 0; i < means_.size(); ++i) {
    if (!is_visible(means_[i], pose, intr_, range_)) continue;
    (is_high_[i] ? high : low) += 1;
  }
  return static_cast<double>(high) - lambda_xi_ * static_cast<double>(low);
}

double variant_score(VariantKind kind, const Pose& pose, const GaussianMap& map, const UncertaintyLedger& ledger,
                     const CameraIntrinsics& intr, double range, const InfoConfig& info) {
  return ViewScorer(map, ledger, kind, info, intr, range).score(pose);
}

}  // namespace gsx

// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// Information scores derived from the displacement ledger: the three-way
// uncertainty partition, cuboidal region utilities, frustum visibility, view
// utility and the binary-Jacobian trace score.

#pragma once

#include "gsx/ledger.hpp"
#include "gsx/splat.hpp"

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gsx {

/// View scoring variants. kStandard counts high minus weighted low Gaussians,
/// kSum adds raw displacements, kSquared classifies squared displacements.
enum class VariantKind { kStandard, kSum, kSquared };

std::string_view to_string(VariantKind kind);
/// Throws std::invalid_argument for an unknown name.
VariantKind parse_variant(std::string_view name);

struct InfoConfig {
  double lambda_xi = 1.0;
  double cell_size = 2.5;   // meters
  double ground_z = 0.25;   // Gaussians at or below this height are ignored for planning
  int top_k_regions = 10;
  int viewpoints_per_region = 8;
};

enum class UncertaintyClass : std::uint8_t { kHigh, kLow, kOther, kIgnored };

struct UncertaintyPartition {
  std::vector<GaussianId> high;
  std::vector<GaussianId> low;
  std::vector<GaussianId> other;
  double tau_hi = 0.0;
  double tau_lo = 0.0;
  bool thresholds_defined = false;  // false when no finite value exists
  /// Class of every Gaussian in map storage order; kIgnored below ground_z.
  std::vector<UncertaintyClass> labels;
};

/// Thresholds at the mean plus/minus half the population standard deviation
/// of finite values above the ground filter. Newborn (+inf) values are high.
UncertaintyPartition classify_values(const GaussianMap& map, std::span<const double> values, double ground_z);

/// classify_values() on the ledger displacements (squared when squared=true).
UncertaintyPartition classify(const GaussianMap& map, const UncertaintyLedger& ledger, double ground_z,
                              bool squared = false);

using CellKey = std::array<int, 3>;

struct Region {
  std::vector<GaussianId> members;
  double omega = 0.0;
  Vec3 centroid = Vec3::Zero();
};

struct RegionGrid {
  Vec3 origin = Vec3::Zero();
  double cell_size = 2.5;
  std::map<CellKey, Region> cells;

  CellKey key_of(const Vec3& p) const;
};

/// Rebuilds the grid cells: members, centroid and omega = mean displacement.
/// Newborn members count as twice the largest finite displacement in the map.
void region_utilities(const GaussianMap& map, const UncertaintyLedger& ledger, RegionGrid& grid, double ground_z,
                      bool squared = false);

void write_regions_csv(std::ostream& out, const RegionGrid& grid);

/// Replaces +inf entries by twice the largest finite entry (1.0 if none).
std::vector<double> cap_newborns(std::span<const double> values);

/// True when the mean projects inside the image with 0 < depth <= range.
bool is_visible(const Vec3& mean, const Pose& pose, const CameraIntrinsics& intr, double range);

/// Ids in ascending order. No occlusion test.
std::vector<GaussianId> visible_set(const Pose& pose, const CameraIntrinsics& intr, double range,
                                    const GaussianMap& map);

/// |visible high| - lambda_xi * |visible low|.
double viewpoint_utility(const Pose& pose, const UncertaintyPartition& partition, const GaussianMap& map,
                         const CameraIntrinsics& intr, double range, double lambda_xi);

/// Tr(J S J^T) with J the visibility selection and S = diag(variances);
/// variances are aligned with the map storage order.
double trace_proxy(const Pose& pose, const CameraIntrinsics& intr, double range, const GaussianMap& map,
                   std::span<const double> variances);

/// Precomputed scorer for many poses against one map snapshot. Only
/// Gaussians that can change the score are kept.
class ViewScorer {
 public:
  ViewScorer(const GaussianMap& map, const UncertaintyLedger& ledger, VariantKind kind, const InfoConfig& info,
             const CameraIntrinsics& intr, double range);

  double score(const Pose& pose) const;
  VariantKind kind() const { return kind_; }
  const UncertaintyPartition& partition() const { return partition_; }

 private:
  VariantKind kind_;
  CameraIntrinsics intr_;
  double range_;
  double lambda_xi_;
  UncertaintyPartition partition_;
  std::vector<Vec3> means_;
  std::vector<double> weights_;  // kSum: capped displacement
  std::vector<std::uint8_t> is_high_;
};

double variant_score(VariantKind kind, const Pose& pose, const GaussianMap& map, const UncertaintyLedger& ledger,
                     const CameraIntrinsics& intr, double range, const InfoConfig& info);

}  // namespace gsx

// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsx/splat.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

namespace gsx {

/// Displacement of a Gaussian that has never been through an optimization
/// pass. Classified as high uncertainty.
inline constexpr double kNewbornDisplacement = std::numeric_limits<double>::infinity();

struct LedgerEntry {
  double displacement = kNewbornDisplacement;  // meters
  std::uint64_t last_update = 0;               // frame index
};

/// Per-Gaussian uncertainty proxy: the norm of the most recent change of the
/// Gaussian's mean. Entries that are not touched keep their old value.
class UncertaintyLedger {
 public:
  void add_newborn(GaussianId id, std::uint64_t frame);
  void set(GaussianId id, double displacement, std::uint64_t frame);
  void retire(std::span<const GaussianId> ids);

  bool contains(GaussianId id) const { return entries_.contains(id); }
  const LedgerEntry& at(GaussianId id) const;
  std::size_t size() const { return entries_.size(); }

  /// Sorted key set.
  std::vector<GaussianId> ids() const;
  /// Displacements aligned with the map's storage order.
  std::vector<double> displacements(const GaussianMap& map) const;

 private:
  std::unordered_map<GaussianId, LedgerEntry> entries_;
};

}  // namespace gsx

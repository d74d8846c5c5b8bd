// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// Binary map snapshots. Layout: one ASCII line "rtg-splat v1 count=<N>\n",
// then N little-endian 44-byte records:
//   u64 id | f32 mean[3] | f32 radius | f32 opacity | f32 color[3] | f32 displacement
// Newborn displacements are stored as +inf.

#pragma once

#include "gsx/ledger.hpp"
#include "gsx/splat.hpp"

#include <filesystem>
#include <iosfwd>

namespace gsx {

inline constexpr std::size_t kSnapshotRecordBytes = 44;

struct MapSnapshot {
  GaussianMap map;
  UncertaintyLedger ledger;
};

/// Writes the map; Gaussians missing from the ledger (or a null ledger) are
/// written with a newborn displacement.
void write_snapshot(std::ostream& out, const GaussianMap& map, const UncertaintyLedger* ledger);
void write_snapshot(const std::filesystem::path& path, const GaussianMap& map, const UncertaintyLedger* ledger);

/// Throws std::runtime_error on a malformed header or truncated body.
MapSnapshot read_snapshot(std::istream& in);
MapSnapshot read_snapshot(const std::filesystem::path& path);

}  // namespace gsx

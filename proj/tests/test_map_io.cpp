// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/map_io.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace gsx {
namespace {

TEST(Snapshot, RoundTripAtFloatPrecision) {
  std::mt19937_64 rng(1);
  GaussianMap map = oracle::random_map(rng, 50, 0.5, 5, 1, 0.01, 0.3);
  map.remove_if([](GaussianId id, const Gaussian&) { return id % 7 == 3; });
  UncertaintyLedger ledger;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (i % 5 == 0) {
      ledger.add_newborn(map.ids()[i], 0);
    } else {
      ledger.set(map.ids()[i], 0.01 * i, 2);
    }
  }
  std::stringstream buf;
  write_snapshot(buf, map, &ledger);
  const std::string bytes = buf.str();
  const auto header_end = bytes.find('\n') + 1;
  EXPECT_EQ(bytes.substr(0, header_end), "rtg-splat v1 count=" + std::to_string(map.size()) + "\n");
  EXPECT_EQ(bytes.size() - header_end, map.size() * kSnapshotRecordBytes);

  const MapSnapshot snap = read_snapshot(buf);
  ASSERT_EQ(snap.map.size(), map.size());
  EXPECT_EQ(snap.map.ids(), map.ids());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Gaussian& a = map[i];
    const Gaussian& b = snap.map[i];
    EXPECT_EQ(b.mean.x(), static_cast<double>(static_cast<float>(a.mean.x())));
    EXPECT_NEAR((a.color - b.color).norm(), 0, 1e-6);
    EXPECT_NEAR(a.radius, b.radius, 1e-7);
    EXPECT_NEAR(a.opacity, b.opacity, 1e-7);
    const double d = snap.ledger.at(map.ids()[i]).displacement;
    if (i % 5 == 0) {
      EXPECT_TRUE(std::isinf(d));
    } else {
      EXPECT_NEAR(d, 0.01 * i, 1e-7);
    }
  }
  EXPECT_GE(snap.map.next_id(), map.ids().back() + 1);
}

TEST(Snapshot, NullLedgerWritesNewborns) {
  GaussianMap map;
  map.add(Gaussian{});
  std::stringstream buf;
  write_snapshot(buf, map, nullptr);
  const MapSnapshot snap = read_snapshot(buf);
  EXPECT_TRUE(std::isinf(snap.ledger.at(0).displacement));
}

TEST(Snapshot, EmptyMap) {
  std::stringstream buf;
  write_snapshot(buf, GaussianMap{}, nullptr);
  EXPECT_EQ(read_snapshot(buf).map.size(), 0u);
}

TEST(Snapshot, MalformedInputThrows) {
  std::stringstream bad_header("splat v2 count=1\n");
  EXPECT_THROW(read_snapshot(bad_header), std::runtime_error);
  GaussianMap map;
  map.add(Gaussian{});
  map.add(Gaussian{});
  std::stringstream buf;
  write_snapshot(buf, map, nullptr);
  std::string bytes = buf.str();
  bytes.resize(bytes.size() - 10);
  std::stringstream truncated(bytes);
  EXPECT_THROW(read_snapshot(truncated), std::runtime_error);
}

TEST(GaussianMap, IdsAreStableAndNeverReused) {
  GaussianMap map;
  for (int i = 0; i < 5; ++i) map.add(Gaussian{});
  const auto retired = map.remove_if([](GaussianId id, const Gaussian&) { return id == 1 || id == 3; });
  EXPECT_EQ(retired, (std::vector<GaussianId>{1, 3}));
  EXPECT_EQ(map.ids(), (std::vector<GaussianId>{0, 2, 4}));
  EXPECT_EQ(map.add(Gaussian{}), 5u);
  EXPECT_EQ(map.index_of(4), std::optional<std::size_t>(2));
  EXPECT_FALSE(map.index_of(3));
}

}  // namespace
}  // namespace gsx

// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/map_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace gsx {
namespace {

constexpr const char* kMagic = "rtg-splat v1 count=";

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(p[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_snapshot(std::ostream& out, const GaussianMap& map, const UncertaintyLedger* ledger) {
  out << kMagic << map.size() << '\n';
  for (std::size_t i = 0; i < map.size(); ++i) {
    const GaussianId id = map.ids()[i];
    const Gaussian& g = map[i];
    put_le<std::uint64_t>(out, id);
    for (int k = 0; k < 3; ++k) put_le<float>(out, static_cast<float>(g.mean[k]));
    put_le<float>(out, static_cast<float>(g.radius));
    put_le<float>(out, static_cast<float>(g.opacity));
    for (int k = 0; k < 3; ++k) put_le<float>(out, static_cast<float>(g.color[k]));
    const double disp = (ledger && ledger->contains(id)) ? ledger->at(id).displacement : kNewbornDisplacement;
    put_le<float>(out, static_cast<float>(disp));
  }
  if (!out) throw std::runtime_error("map snapshot: write failed");
}

void write_snapshot(const std::filesystem::path& path, const GaussianMap& map, const UncertaintyLedger* ledger) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("map snapshot: cannot open " + path.string());
  write_snapshot(out, map, ledger);
}

MapSnapshot read_snapshot(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind(kMagic, 0) != 0) {
    throw std::runtime_error("map snapshot: missing 'rtg-splat v1' header");
  }
  std::size_t count = 0;
  try {
    std::size_t used = 0;
    const std::string digits = header.substr(std::strlen(kMagic));
    count = std::stoull(digits, &used);
    if (used != digits.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::runtime_error("map snapshot: bad count in header '" + header + "'");
  }

  struct Record {
    GaussianId id;
    Gaussian g;
    double displacement;
  };
  std::vector<Record> records(count);
  std::array<unsigned char, kSnapshotRecordBytes> buf{};
  for (std::size_t i = 0; i < count; ++i) {
    if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
      throw std::runtime_error("map snapshot: truncated at record " + std::to_string(i));
    }
    Record& r = records[i];
    r.id = get_le<std::uint64_t>(buf.data());
    for (int k = 0; k < 3; ++k) r.g.mean[k] = get_le<float>(buf.data() + 8 + 4 * k);
    r.g.radius = get_le<float>(buf.data() + 20);
    r.g.opacity = get_le<float>(buf.data() + 24);
    for (int k = 0; k < 3; ++k) r.g.color[k] = get_le<float>(buf.data() + 28 + 4 * k);
    r.displacement = get_le<float>(buf.data() + 40);
  }
  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) { return a.id < b.id; });

  MapSnapshot snap;
  for (const Record& r : records) {
    snap.map.insert_with_id(r.id, r.g);
    snap.ledger.set(r.id, r.displacement, 0);
  }
  return snap;
}

MapSnapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("map snapshot: cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace gsx

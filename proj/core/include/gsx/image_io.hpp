// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsx/splat.hpp"

#include <filesystem>

namespace gsx {

/// 8-bit RGB PNG of the frame color, values clamped to [0, 1].
void write_png(const std::filesystem::path& path, const Frame& frame);

/// 8-bit grayscale PNG of the depth, scaled so max_depth maps to white.
/// Invalid depths are black.
void write_depth_png(const std::filesystem::path& path, const Frame& frame, double max_depth);

}  // namespace gsx

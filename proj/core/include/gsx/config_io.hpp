// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

// JSON run configurations and scene files. Every key is optional and falls
// back to the compiled default; unknown keys are rejected.

#pragma once

#include "gsx/scene.hpp"
#include "gsx/sim.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gsx {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Throws ConfigError on malformed JSON, unknown keys, wrong types or values
/// rejected by RunConfig::validate().
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);
/// Applies "section.key=value" assignments to a config document. The value is
/// read as JSON when it parses, otherwise as a string. Returns the new text.
std::string apply_overrides(std::string_view json_text, const std::vector<std::string>& assignments);

/// Pretty-printed JSON holding every field.
std::string dump_run_config(const RunConfig& cfg);

/// A scene file either holds generator fields
///   {"kind": "rooms", "extent": [12, 12], "height": 2.5, "density": 64,
///    "corridor_width": 3, "seed": 1}
/// or an explicit list
///   {"gaussians": [{"mean": [x,y,z], "radius": r, "opacity": a,
///                   "color": [r,g,b]}, ...],
///    "bounds": {"min": [..], "max": [..]}, "spawn": [x, y, theta]}.
/// Throws ConfigError.
Scene parse_scene(std::string_view json_text, const CollisionParams& collision = {}, double robot_z = 0.3);
Scene load_scene(const std::filesystem::path& path, const CollisionParams& collision = {}, double robot_z = 0.3);

}  // namespace gsx

// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace gsx::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point of the gsx tool. Diagnostics go to `err`, help text to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gsx::cli

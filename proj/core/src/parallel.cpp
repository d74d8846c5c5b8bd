// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace gsx {
namespace {

std::size_t auto_threads() {
  if (const char* env = std::getenv("RTG_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // Malformed values fall back to auto.
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<std::size_t> g_override{0};

}  // namespace

std::size_t thread_count() {
  const std::size_t forced = g_override.load(std::memory_order_relaxed);
  if (forced > 0) return forced;
  static const std::size_t from_env = auto_threads();
  return from_env;
}

void set_thread_count(std::size_t n) { g_override.store(n, std::memory_order_relaxed); }

}  // namespace gsx

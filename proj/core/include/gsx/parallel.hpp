// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gsx {

/// Worker count used by every data-parallel kernel. Reads RTG_THREADS on first
/// use (0 or unset means hardware concurrency).
std::size_t thread_count();

/// Overrides the worker count for the whole process. 0 restores auto.
void set_thread_count(std::size_t n);

/// Runs fn(i) for every i in [0, n). The range is split into contiguous
/// blocks, one per worker; callers must only write to slots owned by i so
/// results never depend on the worker count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t workers = 0) {
  if (workers == 0) workers = thread_count();
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::exception_ptr error;
  std::mutex error_mutex;
  auto run_block = [&](std::size_t w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    try {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run_block, w);
  run_block(0);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace gsx

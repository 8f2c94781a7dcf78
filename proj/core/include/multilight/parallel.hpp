// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace multilight {

/// Resolves a --threads style value: 0 means "use the hardware".
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

/// Runs fn(i) for i in [0, count). Work is split into contiguous chunks,
/// one per worker. Each index owns its output slot, so results are
/// bit-identical for any thread count. The first worker exception is
/// rethrown on the calling thread after all workers join.
inline void parallel_for(int64_t count, int threads,
                         const std::function<void(int64_t)>& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count <= 1) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  if (int64_t(threads) > count) threads = int(count);
  std::vector<std::thread> pool;
  pool.reserve(size_t(threads));
  std::vector<std::exception_ptr> errors(size_t(threads));
  const int64_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int64_t begin = int64_t(t) * chunk;
    const int64_t end = begin + chunk < count ? begin + chunk : count;
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn, &errors, t] {
      try {
        for (int64_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[size_t(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace multilight

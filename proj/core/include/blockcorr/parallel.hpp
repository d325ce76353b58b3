// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace blockcorr {

/// Runs fn(i) for every i in [0, count), statically chunked over threads.
/// Each index runs exactly once; callers keep determinism by writing to
/// per-index slots and keying randomness off the index, never off the
/// schedule. The first exception thrown by any worker is rethrown here.
template <typename F>
void parallel_for_index(std::size_t count, F&& fn, unsigned thread_count = 0) {
    if (count == 0) return;
    unsigned hw = thread_count ? thread_count : std::thread::hardware_concurrency();
    hw = std::max(1u, std::min<unsigned>(hw, static_cast<unsigned>(std::min<std::size_t>(count, 256))));
    if (hw == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(hw);
    for (unsigned t = 0; t < hw; ++t) {
        const std::size_t lo = count * t / hw;
        const std::size_t hi = count * (t + 1) / hw;
        workers.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace blockcorr

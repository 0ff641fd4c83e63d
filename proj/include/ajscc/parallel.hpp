#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ajscc {

// Runs fn(i) for i in [0, count) on up to `workers` threads. Callers write
// results into slot i, so the outcome does not depend on scheduling. The
// first exception thrown by any task is rethrown after all threads join.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::jthread> pool;
    unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(body);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

inline unsigned default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

}  // namespace ajscc

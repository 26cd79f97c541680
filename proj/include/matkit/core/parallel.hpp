#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace matkit::core {

// Runs fn(i) for i in [0, count) across up to `workers` threads. Work items
// claim indices from a shared counter, so per-item cost may vary freely.
// With workers <= 1 everything runs on the calling thread.
template <typename Fn>
void parallel_for(size_t count, int workers, Fn&& fn) {
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const size_t n_threads = std::min<size_t>(static_cast<size_t>(workers), count);
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

inline int default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace matkit::core

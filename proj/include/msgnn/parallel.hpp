#pragma once

#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace msgnn {

// Worker cap: MSGNN_THREADS if set, otherwise hardware concurrency.
inline int thread_count() {
    if (const char* env = std::getenv("MSGNN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static contiguous partition of [0, n). Each index is processed by exactly
// one thread in ascending order, so results never depend on the thread count.
template <typename F>
void parallel_for(std::int64_t n, F&& f, std::int64_t grain = 4096) {
    if (n <= 0) return;
    int workers = thread_count();
    if (n < grain) workers = 1;
    if (workers > n) workers = static_cast<int>(n);
    if (workers == 1) {
        for (std::int64_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (std::int64_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace msgnn

#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace dynball {

// Default worker count: DYNBALL_THREADS env var, else 1.
inline int default_thread_count() {
    if (const char* env = std::getenv("DYNBALL_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

// Index-parallel loop. Results must be written to per-index slots so the
// outcome is independent of the thread count; any reduction happens after.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace dynball

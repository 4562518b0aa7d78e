#pragma once

#include <cstdlib>
#include <cstddef>
#include <thread>
#include <vector>

namespace streamcut {

/// Worker cap for internal parallelism, from MAXCUT_STREAM_THREADS.
/// Defaults to 1 (sequential); results are seed-deterministic either way
/// because every replica owns its generator.
inline unsigned max_threads() {
    static const unsigned cached = [] {
        const char* env = std::getenv("MAXCUT_STREAM_THREADS");
        if (!env) return 1u;
        const long v = std::strtol(env, nullptr, 10);
        if (v < 1) return 1u;
        const unsigned hw = std::thread::hardware_concurrency();
        return static_cast<unsigned>(v) > hw && hw > 0 ? hw : static_cast<unsigned>(v);
    }();
    return cached;
}

template <class F>
void parallel_for(std::size_t count, F&& body) {
    const unsigned threads = max_threads();
    if (threads <= 1 || count < 2 * threads) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = lo + chunk < count ? lo + chunk : count;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace streamcut

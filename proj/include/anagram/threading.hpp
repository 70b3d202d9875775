#pragma once

// Deterministic parallel helpers. Workers write to disjoint preallocated
// slots; reductions happen serially in index order afterwards, so results are
// bit-identical for any thread count.

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace anagram {

/// Worker count: ANAGRAM_THREADS env override, else hardware concurrency.
inline int default_thread_count() {
    if (const char* env = std::getenv("ANAGRAM_THREADS"); env && *env) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Apply fn(i) for i in [begin, end) across up to `threads` workers in
/// contiguous chunks.
inline void parallel_for(int begin, int end, const std::function<void(int)>& fn,
                         int threads = 0) {
    const int n = end - begin;
    if (n <= 0) return;
    if (threads <= 0) threads = default_thread_count();
    threads = std::min(threads, n);
    if (threads == 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (n + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int lo = begin + w * chunk;
        const int hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace anagram

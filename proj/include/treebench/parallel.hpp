#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace treebench {

/// Runs fn(i) for i in [0, count) across up to `jobs` threads. Callers write
/// results into pre-sized storage indexed by i, so reductions stay
/// deterministic regardless of scheduling. fn must not throw.
inline void run_indexed_jobs(int count, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    int workers = std::min(jobs, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

} // namespace treebench

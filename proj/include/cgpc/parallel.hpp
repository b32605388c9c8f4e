#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace cgpc {

// Runs fn(0..n_jobs) on a bounded pool. Jobs must be independent; callers
// write into pre-sized slots, so results are identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t n_jobs, int threads, Fn&& fn) {
    if (threads < 1) threads = 1;
    const auto n_workers = static_cast<std::size_t>(threads) < n_jobs
                               ? static_cast<std::size_t>(threads)
                               : n_jobs;
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < n_jobs; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n_jobs; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline int default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace cgpc

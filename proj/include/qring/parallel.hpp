#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qring {

inline unsigned resolve_jobs(int requested)
{
    if (requested > 0) {
        return static_cast<unsigned>(requested);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs task(i) for i in [0, n) on `jobs` threads. Tasks are claimed in index
/// order; once `cancel` is set no new task starts. Returns the number of
/// tasks that ran. `task` must not throw.
template <class Task>
std::size_t parallel_for(std::size_t n, unsigned jobs, Task&& task, const std::atomic<bool>* cancel = nullptr)
{
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    auto worker = [&] {
        for (;;) {
            if (cancel && cancel->load()) {
                return;
            }
            const std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            task(i);
            done.fetch_add(1);
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < count; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    return done.load();
}

} // namespace qring

#ifndef SPLINELAB_PARALLEL_HPP
#define SPLINELAB_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace splinelab {

// Runs fn(i) for i in [0, n) on a bounded pool. Jobs must not share mutable
// state; reductions happen on indexed slots afterwards so results do not
// depend on the pool size.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         int threads = 0) {
    if (n == 0) return;
    unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
    if (hw < 1) hw = 1;
    if (hw == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    pool.reserve(count - 1);
    for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace splinelab

#endif

#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace veflab {

/// Static block partition of [0,n) over `threads` workers. Workers must write
/// disjoint slots; results are then independent of the schedule.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& body) {
    if (threads <= 1 || n < 2) {
        body(0, n);
        return;
    }
    std::size_t nw = std::min<std::size_t>(threads, n);
    std::size_t chunk = (n + nw - 1) / nw;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nw; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool)
        t.join();
}

inline int default_threads() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace veflab

#pragma once
// Static slab decomposition over the z index for element-wise kernels.
// Each slab writes a disjoint output range, so results are bitwise identical
// for any thread count.

#include <algorithm>
#include <thread>
#include <vector>

namespace mpfd {

template <class F>
void parallel_slabs(int count, int threads, F&& body) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads) - 1);
    const int base = count / threads;
    const int rem = count % threads;
    int k0 = 0;
    for (int t = 0; t < threads; ++t) {
        const int k1 = k0 + base + (t < rem ? 1 : 0);
        if (t + 1 == threads) {
            body(k0, k1);
        } else {
            pool.emplace_back([&body, k0, k1] { body(k0, k1); });
        }
        k0 = k1;
    }
    for (auto& th : pool) th.join();
}

}  // namespace mpfd

#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace mpv::detail {

// Runs fn(i) for i in [0, n) split into contiguous blocks, one per thread.
// Each index is handled by exactly one call, so results do not depend on the
// thread count as long as fn(i) only writes data owned by i.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    threads = std::clamp(threads, 1, std::max(1, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const int block = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * block;
        const int hi = std::min(n, lo + block);
        pool.emplace_back([&, t, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace mpv::detail

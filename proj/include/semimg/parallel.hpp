#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace semimg {

inline unsigned default_jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Work is split
// into contiguous static chunks so results never depend on scheduling.
inline void parallel_for(std::size_t count, unsigned jobs,
                         const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned nthreads = static_cast<unsigned>(
        std::min<std::size_t>(jobs, count));
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    std::vector<std::exception_ptr> errors(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
        threads.emplace_back([&, t]() {
            try {
                const std::size_t lo = count * t / nthreads;
                const std::size_t hi = count * (t + 1) / nthreads;
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace semimg

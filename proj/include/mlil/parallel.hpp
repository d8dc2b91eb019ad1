#ifndef MLIL_PARALLEL_HPP
#define MLIL_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mlil {

/// Number of workers implied by a --jobs value (0 means "all cores").
inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

/// Runs fn(i) for i in [0, count), partitioned over at most `jobs` threads.
/// Each index is processed exactly once; fn must only write to slots it owns.
/// The first exception thrown by any worker is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    const int workers = std::min<std::size_t>(resolve_jobs(jobs), count ? count : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        const std::size_t begin = chunk * t;
        const std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, t, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace mlil

#endif

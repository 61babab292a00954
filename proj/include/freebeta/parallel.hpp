#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <future>
#include <string>
#include <thread>
#include <vector>

namespace freebeta {

/// Worker cap: FREEBETA_THREADS when set to a positive integer, otherwise
/// the machine's hardware concurrency.
inline std::size_t worker_count()
{
    if (const char *env = std::getenv("FREEBETA_THREADS"); env != nullptr) {
        try {
            long v = std::stol(env);
            if (v > 0) {
                return static_cast<std::size_t>(v);
            }
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Applies fn to every index in [0, count) and returns the results in index
/// order, spreading contiguous chunks over at most worker_count() threads.
template <typename Fn>
auto parallel_map(std::size_t count, Fn &&fn) -> std::vector<decltype(fn(std::size_t{}))>
{
    using result_t = decltype(fn(std::size_t{}));
    std::vector<result_t> out(count);
    const std::size_t workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = fn(i);
        }
        return out;
    }
    std::vector<std::future<void>> jobs;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) {
                out[i] = fn(i);
            }
        }));
    }
    for (auto &j : jobs) {
        j.get();
    }
    return out;
}

} // namespace freebeta

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace c3g {

/// Worker count from C3G_WORKERS, else the hardware concurrency. Never
/// affects results, only wall time.
inline unsigned worker_count() {
    if (const char *env = std::getenv("C3G_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return unsigned(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(k) for k in [0, n) on up to `workers` threads. Work is handed
/// out in index order; callers write results into slot k so the merged
/// output does not depend on scheduling. The first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn &&fn) {
    workers = std::max(1u, std::min<unsigned>(workers, unsigned(std::min<std::size_t>(n, 1u << 16))));
    if (workers <= 1 || n < 2) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        constexpr std::size_t chunk = 256;
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= n) return;
            const std::size_t end = std::min(n, begin + chunk);
            try {
                for (std::size_t k = begin; k < end; ++k) fn(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto &t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace c3g

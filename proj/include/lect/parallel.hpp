#ifndef LECT_PARALLEL_HPP
#define LECT_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lect {

/// Process-wide worker count used when a call does not specify one (0 = all cores).
inline int& default_threads()
{
    static int n = 0;
    return n;
}

inline int resolve_threads(int requested)
{
    int n = requested > 0 ? requested : default_threads();
    if (n <= 0) n = int(std::max(1u, std::thread::hardware_concurrency()));
    return n;
}

/**
 * Runs fn(i) for i in [0, n) on up to `threads` workers. Work items are
 * handed out dynamically; results must be written to per-index slots so the
 * output does not depend on scheduling. The first exception is rethrown.
 */
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn)
{
    const int workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace lect

#endif  // LECT_PARALLEL_HPP

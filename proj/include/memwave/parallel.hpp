#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace memwave {

/// Worker count used by parallel_for when none is given. 0 means hardware
/// concurrency.
inline std::atomic<unsigned>& default_thread_count() {
    static std::atomic<unsigned> count{0};
    return count;
}

inline unsigned resolve_thread_count(unsigned requested) {
    if (requested == 0) requested = default_thread_count().load();
    if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
    return requested;
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Indices are
/// handed out dynamically; the first exception thrown is rethrown here.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned threads = 0) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_thread_count(threads), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace memwave

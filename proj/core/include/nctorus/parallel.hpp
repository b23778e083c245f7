#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nctorus {

/// Runs body(i) for i in [0, count) on up to `workers` threads. Work items are
/// claimed in index order and every result is written to its own slot, so the
/// outcome does not depend on the worker count. The first exception (lowest
/// index) is rethrown after all threads joined.
inline void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
    const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(workers < 1 ? 1 : workers));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex guard;
    std::exception_ptr failure;
    std::size_t failure_index = count;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(guard);
                    if (i < failure_index) {
                        failure_index = i;
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace nctorus

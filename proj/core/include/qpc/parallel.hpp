#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qpc {

// Thread count from QPC_THREADS, else hardware concurrency (at least 1).
std::size_t default_thread_count();

// Runs fn(task) for task in [0, tasks) on up to `threads` workers. Tasks are
// claimed from a shared counter, so callers must make per-task results
// independent of which worker ran them. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t tasks, std::size_t threads, Fn&& fn) {
    if (threads <= 1 || tasks <= 1) {
        for (std::size_t t = 0; t < tasks; ++t) {
            fn(t);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
            if (t >= tasks) {
                return;
            }
            try {
                fn(t);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next.store(tasks, std::memory_order_relaxed);
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const std::size_t n = threads < tasks ? threads : tasks;
        pool.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace qpc

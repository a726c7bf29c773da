#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace contrastfs {

/// Worker count used by every parallel pass. Initialised from the
/// CONTRASTFS_THREADS environment variable, else hardware concurrency.
std::size_t worker_count() noexcept;
void set_worker_count(std::size_t workers) noexcept;

/// Restores the previous worker count on scope exit.
class ScopedWorkerCount {
public:
    explicit ScopedWorkerCount(std::size_t workers) : m_previous(worker_count()) { set_worker_count(workers); }
    ~ScopedWorkerCount() { set_worker_count(m_previous); }
    ScopedWorkerCount(const ScopedWorkerCount&) = delete;
    ScopedWorkerCount& operator=(const ScopedWorkerCount&) = delete;

private:
    std::size_t m_previous;
};

/// Splits [0, count) into at most `workers` contiguous chunks and runs
/// fn(begin, end) on each. The chunk boundaries depend on the worker count,
/// so callers must not let results depend on them (per-item work only).
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, std::size_t workers = worker_count())
{
    if (count == 0) {
        return;
    }
    const std::size_t chunks = std::max<std::size_t>(1, std::min(workers, count));
    if (chunks == 1) {
        fn(std::size_t{0}, count);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> threads;
        threads.reserve(chunks - 1);
        auto run = [&](std::size_t c) {
            const std::size_t begin = count * c / chunks;
            const std::size_t end = count * (c + 1) / chunks;
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        };
        for (std::size_t c = 1; c < chunks; ++c) {
            threads.emplace_back(run, c);
        }
        run(0);
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace contrastfs

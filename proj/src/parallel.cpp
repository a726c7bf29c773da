#include "contrastfs/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace contrastfs {

namespace {

std::size_t initial_worker_count() noexcept
{
    if (const char* env = std::getenv("CONTRASTFS_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return v;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::atomic<std::size_t>& workers()
{
    static std::atomic<std::size_t> value{initial_worker_count()};
    return value;
}

}  // namespace

std::size_t worker_count() noexcept
{
    return workers().load(std::memory_order_relaxed);
}

void set_worker_count(std::size_t n) noexcept
{
    workers().store(n == 0 ? 1 : n, std::memory_order_relaxed);
}

}  // namespace contrastfs

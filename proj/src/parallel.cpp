#include "moebius/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace moebius {

unsigned resolve_workers(unsigned requested) {
    unsigned workers = requested;
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    if (const char* env = std::getenv("MOEBIUS_LAB_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) {
            workers = std::min<unsigned>(workers, static_cast<unsigned>(cap));
        }
    }
    return std::max(1u, workers);
}

void parallel_chunks(std::int64_t begin, std::int64_t end, std::int64_t chunk,
                     unsigned workers,
                     const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (begin >= end) {
        return;
    }
    const std::int64_t total = end - begin;
    const std::int64_t n_chunks = (total + chunk - 1) / chunk;
    if (workers <= 1 || n_chunks <= 1) {
        fn(begin, end);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= n_chunks) {
                return;
            }
            const std::int64_t lo = begin + c * chunk;
            const std::int64_t hi = std::min(end, lo + chunk);
            fn(lo, hi);
        }
    };
    const unsigned spawn = static_cast<unsigned>(
        std::min<std::int64_t>(workers, n_chunks));
    std::vector<std::thread> pool;
    pool.reserve(spawn - 1);
    for (unsigned t = 1; t < spawn; ++t) {
        pool.emplace_back(work);
    }
    work();
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace moebius

#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gwalk {

/// Runs f(replica) for replica = 0..count-1 on up to `parallelism` threads.
/// Replicas must derive their randomness by splitting a base stream on the
/// replica index, so results are independent of scheduling; callers merge by
/// writing into replica-indexed slots.
template <class F>
void parallel_replicas(std::int64_t count, int parallelism, F&& f) {
    if (parallelism <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr first_error;
    std::mutex guard;
    const int workers = int(std::min<std::int64_t>(parallelism, count));
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(guard);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gwalk

#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fragmenta {

// worker count: hardware concurrency, capped by FRAGMENTA_THREADS when set
inline unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("FRAGMENTA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            return static_cast<unsigned>(std::min<long>(v, 4L * hw));
    }
    return hw;
}

// f(i) for i in [0, count), dynamically scheduled. Replicate state must be
// derived from the index (e.g. replicate_seed), never from the worker, so
// results are independent of the thread count.
template <class F>
void parallel_for(std::size_t count, F&& f, unsigned threads = 0) {
    if (threads == 0) threads = thread_budget();
    if (count < 2 || threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= count) return;
                    f(i);
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                next.store(count, std::memory_order_relaxed);
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace fragmenta

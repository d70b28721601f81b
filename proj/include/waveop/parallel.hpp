#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace waveop {

inline std::size_t resolve_threads(std::size_t requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Parallel map over [0, count).  Each index writes only its own output
/// slots, so results do not depend on the schedule.
template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& body) {
    const std::size_t nt = std::min(resolve_threads(threads), std::max<std::size_t>(count, 1));
    if (nt <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (failed.load() && err) std::rethrow_exception(err);
}

/// Parallel map over contiguous blocks of [0, count).
template <class F>
void parallel_for_blocks(std::size_t count, std::size_t threads, F&& body) {
    const std::size_t nt = std::min(resolve_threads(threads), std::max<std::size_t>(count, 1));
    if (nt <= 1) {
        body(0, count);
        return;
    }
    const std::size_t step = (count + nt - 1) / nt;
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t lo = t * step;
        const std::size_t hi = std::min(count, lo + step);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi]() {
            try {
                body(lo, hi);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load() && err) std::rethrow_exception(err);
}

}  // namespace waveop

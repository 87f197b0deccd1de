#pragma once

#include <iga/types.hpp>

#include <exception>
#include <thread>
#include <vector>

namespace iga {

// Worker cap: IGA_THREADS when set (>= 1), else the hardware concurrency.
auto max_threads() -> int;

// Static block partition over [0, n); f(i) must write only to slot i state,
// which keeps results independent of the partition (deterministic output).
// Exceptions thrown by workers are rethrown on the calling thread.
template <typename F>
auto parallel_for(Index n, F&& f) -> void {
    const int nt = (n < 128) ? 1 : max_threads();
    if (nt <= 1) {
        for (Index i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nt));
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        const Index lo = n * t / nt;
        const Index hi = n * (t + 1) / nt;
        pool.emplace_back([&f, &errors, t, lo, hi] {
            try {
                for (Index i = lo; i < hi; ++i)
                    f(i);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (const auto& err : errors)
        if (err)
            std::rethrow_exception(err);
}

}  // namespace iga

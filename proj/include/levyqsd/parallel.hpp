#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace levyqsd {

/// Resolves a requested thread count; 0 means hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1U : hw;
}

/// Runs body(i) for i in [0, n) on up to `threads` workers with a static
/// interleaved schedule. Each index must write only its own outputs, which
/// keeps results independent of the thread count. The exception of the lowest
/// failing index is rethrown.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n));
    std::vector<std::exception_ptr> errors(n);
    auto run = [&](unsigned w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        if (n > 0) run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace levyqsd

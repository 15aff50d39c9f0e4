// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace rbc {

// Runs fn(0..count-1) on up to `workers` threads with a static partition.
// Callers write results into per-index slots, so the outcome is identical for
// any worker count. The lowest-indexed worker's exception wins.
inline void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(workers, count);
    std::vector<std::exception_ptr> errors(nthreads);
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        threads.emplace_back([&, t] {
            const std::size_t begin = count * t / nthreads;
            const std::size_t end = count * (t + 1) / nthreads;
            try {
                for (std::size_t i = begin; i < end; ++i)
                    fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : threads)
        th.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace rbc

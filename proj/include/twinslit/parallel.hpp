#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace twinslit {

// Run body(i) for i in [0, n) across `workers` threads with strided index
// assignment. Each index must write only its own slot, so results are
// identical for any worker count. The first exception is rethrown.
template <class Body>
void parallel_for(std::int64_t n, int workers, const Body& body) {
    if (workers <= 1 || n <= 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::int64_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace twinslit

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace spintex {

/// Global worker budget for engines (set once from --threads).
int thread_budget();
void set_thread_budget(int n);

/// Run f(i) for i in [0, n). Work units must be independent; results are
/// written to per-index slots so the reduction is order-independent.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    int budget = thread_budget();
    if (budget <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::size_t n_workers = std::min<std::size_t>(budget, n);
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += n_workers) f(i);
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace spintex

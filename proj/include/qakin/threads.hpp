#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace qakin {

/// Worker cap from QA_KINETICS_THREADS (hardware concurrency by default).
inline int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("QA_KINETICS_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0 && cap < n) n = cap;
    }
    return n;
}

/// Static block partition of [0, n); each index is processed exactly once and
/// results must be written to caller-owned per-index slots, which keeps the
/// aggregate independent of scheduling.
inline void parallel_for(int n, const std::function<void(int)>& body) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace qakin

#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "arakelov/errors.hpp"

namespace arakelov {

// ARAKELOV_THREADS caps the worker count; default 1.
inline int thread_count() {
    const char* v = std::getenv("ARAKELOV_THREADS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1) throw ConfigurationError("ARAKELOV_THREADS must be a positive integer, got '" + std::string(v) + "'");
    return static_cast<int>(std::min<long>(n, 256));
}

// Runs f(i) for i in [0, n). Callers store per-chunk results by index and reduce
// them in index order afterwards, so results do not depend on the thread count.
template <class F>
void parallel_chunks(size_t n, F&& f) {
    size_t workers = std::min<size_t>(static_cast<size_t>(thread_count()), n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (size_t i = w; i < n; i += workers) f(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace arakelov

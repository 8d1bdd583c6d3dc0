#include "muskat/threading.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace muskat {

int worker_count() {
    static const int n = [] {
        if (const char* env = std::getenv("MUSKAT_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1) return static_cast<int>(std::min(v, 256L));
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }();
    return n;
}

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk_fn,
                  int workers) {
    const std::int64_t n = end - begin;
    if (n <= 0) return;
    workers = static_cast<int>(std::min<std::int64_t>(workers, n));
    if (workers <= 1) {
        chunk_fn(begin, end);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = begin + w * chunk;
        const std::int64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&chunk_fn, lo, hi] { chunk_fn(lo, hi); });
    }
    for (auto& t : threads) t.join();
}

}  // namespace muskat

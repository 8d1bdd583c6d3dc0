#pragma once

#include <functional>
#include <cstdint>

namespace muskat {

/// Number of workers used by parallel_for: MUSKAT_THREADS if set,
/// otherwise std::thread::hardware_concurrency().
int worker_count();

/// Static-chunked parallel map over [begin, end). Each index is processed
/// exactly once and the per-index work must not touch shared mutable state,
/// so the result is bitwise identical to the sequential loop for any worker
/// count. workers <= 1 runs inline.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk_fn,
                  int workers);

inline void parallel_for(std::int64_t begin, std::int64_t end,
                         const std::function<void(std::int64_t, std::int64_t)>& chunk_fn) {
    parallel_for(begin, end, chunk_fn, worker_count());
}

}  // namespace muskat

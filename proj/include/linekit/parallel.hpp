#pragma once

#include <cstddef>
#include <functional>

namespace linekit {

// Worker cap: LINEKIT_THREADS when set (minimum 1), else the hardware
// concurrency. Callers must write results into per-index slots so the
// schedule can never change an output.
int worker_count();

// Runs fn(0..n-1) across the worker pool. Rethrows the first exception.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace linekit

#pragma once

#include <cstddef>
#include <functional>

namespace covcal {

// Global worker cap used by parallel_for. 0 restores the hardware default.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n) on contiguous index chunks. Each index is
// processed exactly once; results must be written to per-index slots so the
// outcome is independent of the worker count. The first exception thrown by
// any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace covcal

#pragma once

#include <cstddef>
#include <functional>

namespace hypolab {

/// Number of worker threads used by parallel_for (default 1).
void set_thread_count(int n);
int thread_count() noexcept;

/// Runs body(i) for i in [0, n) split into contiguous chunks, one per worker.
/// Bodies must write disjoint outputs; callers reduce afterwards in index
/// order, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hypolab

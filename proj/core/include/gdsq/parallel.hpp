#pragma once

#include <functional>

namespace gdsq {

// Worker count for parallel loops: GDSQ_THREADS if set (clamped to >= 1),
// otherwise hardware concurrency.
int worker_count();

// Runs fn(begin, end) over a static partition of [0, n). Results must be
// written to preallocated slots indexed by the loop variable so that the
// outcome is independent of the schedule. Falls back to a plain loop when a
// single worker is configured.
void parallel_for(int n, const std::function<void(int, int)>& fn);

}  // namespace gdsq

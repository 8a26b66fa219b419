#pragma once

#include <cstddef>
#include <functional>

namespace relexp {

// Worker count from RELEXP_WORKERS, else the hardware concurrency; at least 1.
int worker_count();

// Calls body(k) for k in [0, count) across worker threads. Each index is
// handled exactly once; callers write results into per-index slots so the
// output does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace relexp

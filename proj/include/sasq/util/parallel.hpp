#pragma once

#include <cstddef>
#include <functional>

namespace sasq {

// Number of worker threads used by parallel_for. Defaults to the hardware
// concurrency; override with the SASQ_THREADS environment variable.
int worker_count();

// Runs fn(i) for i in [0, n). Work items must write only to disjoint,
// preallocated slots so that the result is identical for any thread count;
// reductions over the slots are done by the caller in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sasq

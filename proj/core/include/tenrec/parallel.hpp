#pragma once

#include <functional>

#include "tenrec/tensor.hpp"

namespace tenrec {

/// Worker count for data-parallel loops: hardware concurrency, capped by the
/// TENREC_THREADS environment variable when set. Always at least 1.
int thread_budget();

/// Runs fn(i) for every i in [0, count) across the budgeted workers.
/// fn must be safe to call concurrently for distinct i. The first exception
/// thrown by any invocation is rethrown after all workers stop.
void parallel_for(Index count, const std::function<void(Index)>& fn);

}  // namespace tenrec

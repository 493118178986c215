#pragma once

#include <cstddef>
#include <functional>

namespace phasecrb {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is processed
/// exactly once; results written by index are independent of scheduling. The first exception
/// thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// Worker count from an explicit request, else PHASECRB_THREADS, else 1.
int resolve_threads(int requested);

} // namespace phasecrb

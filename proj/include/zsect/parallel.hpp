#pragma once

#include <cstddef>
#include <functional>

namespace zsect {

/// Worker count from ZSECT_WORKERS, else the hardware concurrency (at least 1).
std::size_t default_workers();

/// Calls fn(i) for i in [0, count) on up to `workers` threads (0 = default_workers()).
/// Callers write results into per-index slots, so output never depends on scheduling.
/// If any call throws, the exception from the smallest index is rethrown.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace zsect

#pragma once

#include <cstddef>
#include <functional>

namespace framephase {

/// Worker count: FRAMEPHASE_THREADS if set to a positive integer, else hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, count) across up to thread_count() workers.
/// Callers write results into per-index slots so output never depends on scheduling.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace framephase

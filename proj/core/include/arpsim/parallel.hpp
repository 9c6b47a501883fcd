#pragma once

#include <cstddef>
#include <functional>

namespace arpsim {

/// std::thread::hardware_concurrency(), at least 1.
unsigned default_worker_count();

/// Calls task(i) for every i in [0, count) on up to `workers` threads (0 = default).
/// Indices are handed out in ascending order. If any task throws, no new tasks
/// start and the exception of the lowest failing index is rethrown, so the
/// reported failure does not depend on scheduling.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

}  // namespace arpsim

#pragma once

#include <functional>

namespace percmsm {

// Runs task(0..n_tasks-1) on up to n_threads workers (0 = hardware count).
// Tasks must write to disjoint slots; callers reduce in index order, so
// results never depend on the thread count.
void parallel_for(int n_tasks, int n_threads, const std::function<void(int)>& task);

}  // namespace percmsm

#pragma once

#include <cstdint>
#include <functional>

namespace dab {

// Process-wide worker count for parallel_for.  Defaults to 1.
int thread_count();
void set_thread_count(int n);

// Runs body(i) for i in [0, n).  Bodies must be independent and write only
// to their own output slot; reductions happen sequentially afterwards, so
// results are identical for every thread count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);

}  // namespace dab

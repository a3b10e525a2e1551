#pragma once

#include <cstddef>
#include <functional>

namespace homeolife {

// Worker count from HOMEOLIFE_THREADS (unset or 0 = hardware concurrency).
unsigned worker_count();

// Calls body(i) for every i in [0, n), possibly from several threads. Each
// index is visited exactly once; body must only write to index-owned state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace homeolife

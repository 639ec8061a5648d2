#pragma once

#include <cstddef>
#include <functional>

namespace rstn {

// Worker count: RSTN_THREADS if set, else hardware concurrency (at least 1).
int worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rstn

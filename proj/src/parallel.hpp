#pragma once

#include <cstddef>
#include <functional>

namespace cavicool::detail {

// Worker count from CAVICOOL_THREADS, else the hardware concurrency.
unsigned thread_count();

// Calls body(i) for i in [0, n) on up to `threads` workers. Each index is
// visited exactly once; results must be written to per-index slots.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace cavicool::detail

#pragma once

#include <cstddef>
#include <functional>

namespace freeconv {

/// Worker count: hardware concurrency, capped by FREECONV_THREADS when set.
unsigned thread_count();

/// Calls body(i) for i in [0, n) over contiguous chunks on thread_count()
/// threads. The first exception thrown by any chunk is rethrown after all
/// workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace freeconv

#pragma once

#include <cstddef>
#include <functional>

namespace cdeform {

/// Worker count: CD_THREADS when set (>= 1), else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) across thread_count() workers. Items are
/// claimed dynamically, so callers must write results by index and reduce
/// afterwards. The first exception thrown by a body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cdeform

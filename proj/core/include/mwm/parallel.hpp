// parallel.hpp — Order-preserving parallel map over an index range
#pragma once

#include <cstddef>
#include <functional>

namespace mwm {

/// Runs fn(0) .. fn(n-1) on up to `jobs` worker threads. For pure fn the
/// results are identical to the serial loop; exceptions are rethrown on the
/// calling thread.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

} // namespace mwm

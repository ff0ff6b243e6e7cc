#pragma once

#include <cstddef>
#include <functional>

namespace cavityline {

/// Worker count: CAVITYLINE_THREADS when set to a positive integer, else the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, count). Bodies must write only to slot i of
/// their outputs; the result is then independent of scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace cavityline

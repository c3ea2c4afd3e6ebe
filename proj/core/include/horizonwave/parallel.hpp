#pragma once

#include <cstddef>
#include <functional>

namespace horizonwave {

/// Worker cap for library-internal parallel loops. Defaults to
/// HORIZONWAVE_THREADS when set, otherwise the hardware concurrency.
int max_threads();
void set_max_threads(int n);

/// Runs body(i) for i in [0, n) on up to max_threads() workers. Callers keep
/// results deterministic by writing to per-index slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace horizonwave

#pragma once

#include <cstddef>
#include <functional>

namespace billiard {

// Upper bound on worker threads used by library loops. 0 means hardware concurrency.
void set_max_threads(unsigned count) noexcept;
unsigned max_threads() noexcept;

// Runs body(i) for i in [0, n) split into contiguous chunks.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace billiard

#pragma once

#include <cstddef>
#include <functional>

namespace edgelab {

// Number of worker threads used by batch samplers. 0 means
// std::thread::hardware_concurrency().
void set_thread_count(unsigned threads) noexcept;
unsigned thread_count() noexcept;

// Runs body(i) for i in [0, n). Each index is handled by exactly one thread,
// so writing to slot i of a preallocated output is race-free and the result
// does not depend on the thread count. Exceptions are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace edgelab

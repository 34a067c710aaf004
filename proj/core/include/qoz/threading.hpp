#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qoz {

/// Worker cap for parallel maps; 0 means hardware concurrency.
/// Results are written into per-index slots, so the outcome is independent
/// of the thread count.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Static block partition of [0, n) over workers; fn(i) must only touch
/// state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace qoz

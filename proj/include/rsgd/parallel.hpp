#pragma once

#include <cstddef>

#include <functional>

namespace rsgd {

// Thread cap from REWARD_SGD_THREADS (default 1, i.e. sequential).
unsigned thread_cap();

// Runs fn(i) for i in [0, count). Items must be independent; callers
// reduce results in a fixed order afterwards, so the outcome is identical
// under any thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned threads = thread_cap());

}  // namespace rsgd

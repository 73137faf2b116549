#pragma once

#include <cstddef>
#include <functional>

namespace padic {

/// Worker count used by parallel loops; 1 means run inline.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls fn(i) for every i in [0, n), split into contiguous chunks across
/// the configured workers. fn must write only to slot-i state; callers
/// reduce afterwards in index order so results do not depend on threading.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace padic

#pragma once

#include <cstddef>
#include <functional>

namespace errbound {

/// Worker count: ERRORBOUND_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(begin, end) on contiguous chunks of [0, n) from up to `workers`
/// threads. Exceptions from any chunk are rethrown on the caller.
void parallel_for_chunks(std::size_t n, std::size_t workers,
                         const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace errbound

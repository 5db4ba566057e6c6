#pragma once

#include <cstddef>
#include <functional>

namespace arstack {

/// 0 means "use the machine's hardware concurrency".
unsigned resolve_threads(unsigned requested) noexcept;

/// Splits [0, count) into contiguous chunks and runs `body(begin, end)` on up
/// to `threads` workers.  Chunk boundaries depend only on `count` and the
/// thread count, and each index is visited exactly once.  The first
/// exception thrown by a worker is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace arstack

#pragma once

#include <cstddef>
#include <functional>

namespace retrobell {

/// Worker count from RETROBELL_THREADS (unset or 0 means hardware concurrency).
int worker_count();

/// Splits [0, n) into fixed-size chunks and calls fn(chunk_index, begin, end)
/// for each, possibly concurrently. Chunk boundaries depend only on n and
/// chunk_size, so results that are keyed by chunk index are independent of
/// the number of workers.
void for_each_chunk(std::size_t n, std::size_t chunk_size,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

inline constexpr std::size_t kPairChunk = 4096;

}  // namespace retrobell

#pragma once

#include <cstddef>
#include <functional>

namespace uukin {

/// Worker count used by the parallel kernels. Read once from UUKIN_THREADS
/// (falls back to hardware concurrency); can be overridden programmatically.
std::size_t worker_count();
void set_worker_count(std::size_t n);

/// Runs body(chunk) for chunk in [0, n_chunks). Chunks are claimed dynamically
/// by the workers, so callers that need deterministic results must make each
/// chunk write to its own slot and reduce the slots in chunk order afterwards.
void parallel_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& body);

}  // namespace uukin

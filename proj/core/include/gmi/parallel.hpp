#pragma once

#include <cstddef>
#include <functional>

namespace gmi {

/// Worker threads used by parallel_for. Defaults to hardware concurrency;
/// override with the GMI_THREADS environment variable.
std::size_t worker_count();

/// Runs fn(i) for every i in [0, count), distributing work over a transient
/// thread pool. Blocks until all calls return. Distinct indices may run
/// concurrently and in any order; results must be written to per-index slots.
/// The first exception thrown by any fn is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace gmi

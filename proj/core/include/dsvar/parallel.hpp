#pragma once

#include <cstddef>
#include <functional>

namespace dsvar {

/// Worker count from DSVAR_THREADS, else the hardware concurrency (at least 1).
int default_thread_count();

/// Run body(0..count-1) on up to `threads` workers.
///
/// Indices are handed out dynamically; callers write results into per-index
/// slots so the outcome does not depend on scheduling. If any call throws,
/// the exception from the lowest failing index is rethrown after all workers
/// finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace dsvar

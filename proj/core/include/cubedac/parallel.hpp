#pragma once

#include <cstdint>
#include <functional>

namespace cubedac {

int hardware_threads();

// requested <= 0 means "all logical cores"
int resolve_threads(int requested);

// Runs body(0) ... body(count-1) across up to `threads` workers. Iterations
// must write to disjoint state. If any iteration throws, the exception from
// the lowest-index failing iteration is rethrown after all workers finish,
// so error reporting is deterministic too.
void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& body);

}  // namespace cubedac

#pragma once

#include <functional>

namespace pa {

// Worker cap from PA_FORGE_THREADS (default: hardware concurrency, at least 1).
int thread_cap();
// Runs fn(i) for i in [0, n). Each index writes only its own output slot, so
// results do not depend on scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace pa

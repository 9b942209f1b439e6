#pragma once

#include <functional>

namespace lle {

// Worker count: LLE_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Runs body(k) for k in [0, n). Each index must write only its own output slot,
// which keeps results independent of the thread count.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace lle

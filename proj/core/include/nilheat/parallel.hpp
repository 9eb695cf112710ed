#pragma once

#include <cstddef>
#include <functional>

namespace nilheat {

// Worker count used by parallel loops: set_threads() if called, else NILHEAT_THREADS, else hardware concurrency.
int thread_count();
void set_threads(int n);

// Calls body(i) for i in [0, n). Work items are independent; callers store results by index and
// reduce them in index order so output does not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nilheat

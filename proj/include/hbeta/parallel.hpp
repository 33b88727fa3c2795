#pragma once

#include <cstddef>
#include <functional>

namespace hbeta {

/// Worker cap: HBETA_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads.
/// Calls made from inside a worker run serially. Exceptions thrown by any task are rethrown (first by index) after all
/// workers have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hbeta

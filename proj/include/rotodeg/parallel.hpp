#pragma once

#include <cstddef>
#include <functional>

namespace rotodeg {

/// Worker count: ROTODEG_THREADS if set (≥ 1), else hardware concurrency.
unsigned thread_count();

/// Runs body(k) for k in [0, n) on up to thread_count() threads. The first
/// exception by index order is rethrown after all workers finish, so errors
/// are reported deterministically.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

}  // namespace rotodeg

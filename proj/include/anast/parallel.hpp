#pragma once

#include <cstddef>
#include <functional>

namespace anast {

// Number of threads the dense kernels may use. Controlled by the
// ANAST_THREADS environment variable; 0 or unset means auto (one per
// hardware thread). Read once, cached.
std::size_t kernel_threads();

// Runs block(begin, end) over contiguous sub-ranges of [0, n).
// Each index lands in exactly one block, so callers that partition
// independent rows get bitwise-identical results for any thread count.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& block);

}  // namespace anast

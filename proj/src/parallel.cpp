#include "anast/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace anast {

namespace {

std::size_t read_thread_env() {
  const char* env = std::getenv("ANAST_THREADS");
  std::size_t n = 0;
  if (env != nullptr && *env != '\0') {
    try {
      long v = std::stol(env);
      n = v > 0 ? static_cast<std::size_t>(v) : 0;
    } catch (...) {
      n = 0;  // unparsable -> auto
    }
  }
  if (n == 0) {
    n = std::max(1u, std::thread::hardware_concurrency());
  }
  return n;
}

}  // namespace

std::size_t kernel_threads() {
  static const std::size_t n = read_thread_env();
  return n;
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& block) {
  if (n == 0) return;
  const std::size_t threads = std::min(kernel_threads(), n);
  // Spawning is not worth it for tiny ranges.
  if (threads <= 1 || n < 2 * threads) {
    block(0, n);
    return;
  }
  const std::size_t chunk = (n + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    if (begin >= n) break;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&block, begin, end] { block(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace anast

#ifndef TETFEC_PARALLEL_HPP
#define TETFEC_PARALLEL_HPP

/// Minimal fork-join helper. Work items must be independent; all engine values
/// are immutable after construction, so sharing inputs across threads is safe.

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace tetfec {

/// Default worker count: TETFEC_JOBS env var if set, else hardware threads.
inline unsigned default_jobs() {
  if (const char* env = std::getenv("TETFEC_JOBS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Run fn(i) for i in [0, n) across up to `jobs` threads (0 = default).
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         unsigned jobs = 0) {
  if (jobs == 0) jobs = default_jobs();
  if (n == 0) return;
  if (jobs <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace tetfec

#endif

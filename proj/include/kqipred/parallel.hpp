/*!
 * Copyright (c) 2026 by Contributors
 * \file parallel.hpp
 */
#ifndef KQIPRED_PARALLEL_HPP_
#define KQIPRED_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace kqipred {

/*! \brief Resolve a thread-count request; 0 means "use the hardware". */
inline unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/*!
 * \brief Run fn(i) for i in [0, n) on up to n_threads workers.
 *
 * Indices are split into contiguous blocks. Results must be written to
 * index-addressed slots by the callers; the outcome is then independent of
 * the thread count. The first worker exception (lowest block) is rethrown.
 */
template <typename Fn>
void parallel_for(std::size_t n, int n_threads, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(n_threads), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace kqipred

#endif  // KQIPRED_PARALLEL_HPP_

#pragma once

// Worker pool sizing, static-partition parallel loops and fixed-order
// reductions. Every reduction in the library goes through pairwise_reduce so
// results never depend on the number of workers.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace landau {

/// Number of workers used by parallel_for. Read from LANDAU_THREADS on each
/// call; falls back to the hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("LANDAU_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && value > 0) return static_cast<int>(std::min<long>(value, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [0, count) on contiguous chunks, one per worker.
/// The body must only write to locations owned by its index.
template <class Body>
void parallel_for(std::size_t count, Body&& body, std::size_t min_chunk = 4096) {
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(worker_count()), (count + min_chunk - 1) / std::max<std::size_t>(min_chunk, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Pairwise (cascade) summation of term(i) over [begin, end).
template <class Term>
double pairwise_reduce(std::size_t begin, std::size_t end, const Term& term) {
  constexpr std::size_t kBlock = 64;
  if (end - begin <= kBlock) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_reduce(begin, mid, term) + pairwise_reduce(mid, end, term);
}

inline double pairwise_sum(std::span<const double> values) {
  return pairwise_reduce(0, values.size(), [&](std::size_t i) { return values[i]; });
}

}  // namespace landau

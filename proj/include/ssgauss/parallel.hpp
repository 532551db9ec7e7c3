#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <span>

namespace ssgauss {

/// Number of worker threads: the value set by set_thread_count, else the
/// SSGAUSS_THREADS environment variable, else hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, count) on up to thread_count() threads with
/// static contiguous chunks.  Results must be written to per-index slots so
/// that the outcome does not depend on the number of threads.  The first
/// exception thrown by a worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Like parallel_for but hands each worker a contiguous range [begin, end)
/// together with its worker id (for per-thread scratch space).
void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t worker, std::size_t begin,
                                              std::size_t end)>& body);

/// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> values);

}  // namespace ssgauss

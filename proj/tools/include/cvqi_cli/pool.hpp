#pragma once

#include <cstddef>
#include <functional>

namespace cvqi::cli {

/// Worker count: hardware concurrency, capped by QI_THREADS when set to a
/// positive integer, and by the number of jobs.
std::size_t worker_count(std::size_t jobs);

/// Runs job(i) for i in [0, count) on a pool of worker_count(count) threads.
/// Each index runs exactly once; the exception from the lowest failing index
/// is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job);

}  // namespace cvqi::cli

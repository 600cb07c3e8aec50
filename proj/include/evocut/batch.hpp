#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "evocut/random.hpp"

namespace evocut {

/// Runs `job(index, rng)` for index in [0, runs), each with its own Rng
/// seeded by derive_seed(seed, index). Results come back in index order, so
/// the output does not depend on `threads`.
template <typename Job>
auto run_batch(std::size_t runs, std::uint64_t seed, unsigned threads, Job job) {
  using Result = decltype(job(std::size_t{0}, std::declval<Rng&>()));
  std::vector<Result> results(runs);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(runs, 1))));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < runs; i = next++) {
      try {
        Rng rng(derive_seed(seed, i));
        results[i] = job(i, rng);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace evocut

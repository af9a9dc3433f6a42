#ifndef DEBIAS_PARALLEL_HPP_
#define DEBIAS_PARALLEL_HPP_

#include "debias/types.hpp"

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace debias {

/// Runs body(i) for i in [begin, end) on up to `threads` workers (0 means the
/// hardware concurrency). Results must be written to index-addressed storage:
/// iteration order is unspecified across workers, so determinism comes from
/// indexing, not ordering. The first exception thrown by any body is rethrown.
inline void parallel_for(Index begin, Index end, int threads,
                         const std::function<void(Index)>& body) {
  if (end <= begin) return;
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  const Index count = end - begin;
  if (threads == 1 || count == 1) {
    for (Index i = begin; i < end; ++i) body(i);
    return;
  }
  if (static_cast<Index>(threads) > count) threads = static_cast<int>(count);

  std::mutex mu;
  std::exception_ptr first_error;
  Index next = begin;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&]() {
      for (;;) {
        Index i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (first_error || next >= end) return;
          i = next++;
        }
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace debias

#endif  // DEBIAS_PARALLEL_HPP_

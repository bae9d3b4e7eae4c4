#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace selfsim {

// Number of worker threads for parallel loops; 0 means hardware concurrency.
void set_jobs(int jobs);
int jobs();

// Evaluates fn(0), ..., fn(n-1) on the worker pool and returns the results in
// index order, so callers that fold the vector get the same answer for any
// thread count. The first exception thrown by a task is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs()), n);
  if (workers <= 1) {
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
  }
  std::vector<std::optional<T>> slots(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace selfsim

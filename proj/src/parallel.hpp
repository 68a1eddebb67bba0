#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace indel::detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

// Runs body(worker, task) for every task in [0, tasks) on `workers` threads.
// Tasks are handed out dynamically; the first exception is rethrown.
template <typename Body>
void parallel_tasks(unsigned workers, std::size_t tasks, Body&& body) {
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks, 1)));
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) body(0U, t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned id = 0; id < workers; ++id) {
    pool.emplace_back([&, id] {
      try {
        for (std::size_t t = next++; t < tasks; t = next++) body(id, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = tasks;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace indel::detail

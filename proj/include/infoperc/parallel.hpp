#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace infoperc {

// Worker count from INFOPERC_WORKERS, else the hardware concurrency.
inline int default_workers() {
  if (const char* env = std::getenv("INFOPERC_WORKERS")) {
    const int k = std::atoi(env);
    if (k > 0) return k;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

// Runs job(r) for r in [0, count) on a pool of stateless workers and returns
// results indexed by r. Each job must derive its randomness from r alone, so
// the returned vector is independent of the schedule. The first exception
// thrown by any job is rethrown after all workers stop.
template <class Job>
auto run_replicas(std::size_t count, Job&& job, int workers = 0)
    -> std::vector<std::invoke_result_t<Job&, std::size_t>> {
  using Result = std::invoke_result_t<Job&, std::size_t>;
  std::vector<Result> results(count);
  if (workers <= 0) workers = default_workers();
  workers = int(std::min<std::size_t>(std::size_t(workers), count));
  if (workers <= 1) {
    for (std::size_t r = 0; r < count; ++r) results[r] = job(r);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= count || failed.load()) return;
      try {
        results[r] = job(r);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(std::size_t(workers));
  for (int k = 0; k < workers; ++k) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace infoperc

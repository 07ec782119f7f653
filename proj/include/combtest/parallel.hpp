#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace combtest {

// Evaluates fn(trial, state) for every trial in [0, count) on `workers`
// threads and returns the per-trial results in trial order. Each worker owns
// a `state` made by make_state(). Results do not depend on the number of
// workers as long as fn(trial, state) depends only on the trial index.
template <typename MakeState, typename Fn>
std::vector<double> parallel_trials(std::int64_t count, int workers, MakeState make_state, Fn fn) {
  std::vector<double> results(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  constexpr std::int64_t kChunk = 64;
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    auto state = make_state();
    while (true) {
      const std::int64_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::int64_t end = std::min(count, begin + kChunk);
      try {
        for (std::int64_t t = begin; t < end; ++t) results[static_cast<std::size_t>(t)] = fn(t, state);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };

  const int threads = std::max(1, workers);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace combtest

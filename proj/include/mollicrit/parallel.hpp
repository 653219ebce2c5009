#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

// Deterministic parallel helpers. All reductions combine block results in
// block-index order, so outputs are bit-identical for every worker count.

namespace mollicrit::par {

inline int& thread_count_ref() {
  static int n = [] {
    if (const char* env = std::getenv("MOLLICRIT_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
  }();
  return n;
}

inline int thread_count() { return thread_count_ref(); }
inline void set_thread_count(int n) {
  if (n > 0) thread_count_ref() = n;
}

// Independent iterations writing to disjoint outputs; no ordering concerns.
template <class Fn>
void parallel_for(std::size_t n, Fn fn) {
  const int workers = std::min<std::size_t>(thread_count(), n ? n : 1);
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& t : pool) t.join();
}

// Map blocks 0..n_blocks-1 through fn (possibly concurrently), then feed the
// results to combine strictly in ascending block order. Memory stays bounded:
// workers stall once too many uncombined results pile up.
template <class R, class Fn, class Combine>
void ordered_reduce(std::size_t n_blocks, Fn fn, Combine combine) {
  const int workers = std::min<std::size_t>(thread_count(), n_blocks ? n_blocks : 1);
  if (workers <= 1 || n_blocks < 2) {
    for (std::size_t b = 0; b < n_blocks; ++b) combine(fn(b), b);
    return;
  }
  std::mutex mtx;
  std::condition_variable cv_ready, cv_space;
  std::map<std::size_t, R> done;
  std::atomic<std::size_t> next{0};
  std::size_t combined = 0;
  const std::size_t window = static_cast<std::size_t>(2 * workers) + 2;

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t b = next.fetch_add(1); b < n_blocks;
           b = next.fetch_add(1)) {
        R r = fn(b);
        std::unique_lock<std::mutex> lock(mtx);
        cv_space.wait(lock, [&] { return b < combined + window; });
        done.emplace(b, std::move(r));
        cv_ready.notify_all();
      }
    });

  {
    std::unique_lock<std::mutex> lock(mtx);
    while (combined < n_blocks) {
      cv_ready.wait(lock, [&] { return done.count(combined) > 0; });
      auto node = done.extract(combined);
      lock.unlock();
      combine(std::move(node.mapped()), combined);
      lock.lock();
      ++combined;
      cv_space.notify_all();
    }
  }
  for (auto& t : pool) t.join();
}

}  // namespace mollicrit::par

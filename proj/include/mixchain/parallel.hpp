#pragma once

#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mixchain {

// Worker cap: hardware concurrency, optionally limited by MIXCHAIN_THREADS.
inline unsigned thread_cap() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("MIXCHAIN_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
  }
  return hw;
}

// Runs f(i) for i in [0, n). Each index writes only its own output slot, so
// results are identical to the serial order.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  unsigned workers = thread_cap();
  if (n <= 1 || workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace mixchain

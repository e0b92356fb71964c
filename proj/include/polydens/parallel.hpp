#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace polydens {

// Runs fn(worker, begin, end) over contiguous blocks of [0, n). Block
// boundaries depend only on (n, workers), so per-worker results merged in
// worker order are reproducible. The first exception thrown is rethrown.
template <class Fn>
void parallel_blocks(std::size_t n, int workers, Fn&& fn) {
  std::size_t w = static_cast<std::size_t>(std::max(1, workers));
  w = std::min(w, std::max<std::size_t>(n, 1));
  if (w == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (std::size_t k = 0; k < w; ++k) {
    std::size_t begin = n * k / w;
    std::size_t end = n * (k + 1) / w;
    threads.emplace_back([&, k, begin, end] {
      try {
        fn(k, begin, end);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace polydens

#pragma once

// Deterministic partitioned enumeration: fn(i) runs for i in [0, n), results
// are concatenated in index order, so the output is independent of how the
// range was split across workers.

#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

namespace orecalc {

template <typename T, typename Fn>
std::vector<T> parallel_collect(std::uint64_t n, Fn&& fn, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads > 1 && n / threads < 1024) threads = 1;  // not worth spawning

  if (threads <= 1) {
    std::vector<T> out;
    for (std::uint64_t i = 0; i < n; ++i) {
      if (auto r = fn(i)) out.push_back(std::move(*r));
    }
    return out;
  }

  std::vector<std::vector<T>> partials(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::uint64_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const std::uint64_t lo = t * chunk;
      const std::uint64_t hi = std::min(n, lo + chunk);
      for (std::uint64_t i = lo; i < hi; ++i) {
        if (auto r = fn(i)) partials[t].push_back(std::move(*r));
      }
    });
  }
  for (auto& th : pool) th.join();

  std::vector<T> out;
  for (auto& part : partials) {
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

}  // namespace orecalc

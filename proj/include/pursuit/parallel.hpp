#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace pursuit {

// Runs fn(i) for i in [0, n) split into fixed-size chunks.  The chunk
// boundaries depend only on n, never on the thread count, so per-chunk
// state combined in chunk order gives thread-count-independent results.
inline constexpr std::int64_t kChunkSize = 1024;

template <typename ChunkFn>
void for_each_chunk(std::int64_t n, int threads, ChunkFn&& fn) {
  if (n <= 0) return;
  const std::int64_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
  if (threads <= 1 || n_chunks == 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      fn(c, c * kChunkSize, std::min(n, (c + 1) * kChunkSize));
    }
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks || failed.load()) return;
      try {
        fn(c, c * kChunkSize, std::min(n, (c + 1) * kChunkSize));
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int t = std::min<std::int64_t>(threads, n_chunks);
  pool.reserve(t);
  for (int i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failed.load()) std::rethrow_exception(error);
}

// Per-trial map into a chunk-local accumulator, then an ordered reduce over
// chunks.  Acc must be default-constructible.
template <typename Acc, typename MapFn, typename CombineFn>
Acc map_reduce_trials(std::int64_t trials, int threads, MapFn&& map,
                      CombineFn&& combine) {
  const std::int64_t n_chunks = (trials + kChunkSize - 1) / kChunkSize;
  std::vector<Acc> partial(static_cast<std::size_t>(std::max<std::int64_t>(n_chunks, 0)));
  for_each_chunk(trials, threads,
                 [&](std::int64_t c, std::int64_t lo, std::int64_t hi) {
                   Acc acc;
                   for (std::int64_t i = lo; i < hi; ++i) map(acc, i);
                   partial[static_cast<std::size_t>(c)] = std::move(acc);
                 });
  Acc total;
  for (auto& p : partial) combine(total, p);
  return total;
}

}  // namespace pursuit

#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace meanfix {

/// Number of workers to use when the caller asks for "all cores".
inline int default_workers() { return std::max(1U, std::thread::hardware_concurrency()); }

/// Splits [0, n) into `workers` contiguous chunks and runs fn(begin, end, chunk)
/// on each. Chunk boundaries depend only on n and workers.
template <class Fn>
void parallel_chunks(std::size_t n, int workers, Fn &&fn) {
  const std::size_t w = std::clamp<std::size_t>(workers < 1 ? 1 : workers, 1, std::max<std::size_t>(n, 1));
  if (w == 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(w - 1);
  const std::size_t step = (n + w - 1) / w;
  for (std::size_t c = 1; c < w; ++c) {
    const std::size_t b = std::min(n, c * step);
    const std::size_t e = std::min(n, b + step);
    pool.emplace_back([&fn, b, e, c] { fn(b, e, c); });
  }
  fn(std::size_t{0}, std::min(n, step), std::size_t{0});
}

} // namespace meanfix

#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace ninf::detail {

// Splits [0, count) into contiguous chunks, one per worker. body(begin, end, worker).
template <class Body>
void parallel_chunks(std::size_t count, int threads, Body&& body) {
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    body(std::size_t{0}, count, 0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&body, begin, end, w] { body(begin, end, static_cast<int>(w)); });
  }
}

}  // namespace ninf::detail

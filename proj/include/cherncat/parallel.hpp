#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace cherncat {

/// Process toggle for data-parallel tensor evaluation; set by the CLI flag.
inline std::atomic<bool>& parallel_enabled() {
  static std::atomic<bool> flag{false};
  return flag;
}

/// Runs fn(i) for i in [0, n). Entries must be independent; when the toggle is
/// off or n is small the loop stays serial so results are reproducible either way.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  if (!parallel_enabled() || n < 64 || hw < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers = std::min<std::size_t>(hw, n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace cherncat

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace ineqbias {

/// Pairwise summation with a fixed split pattern: the result depends only on
/// the values and their order.
inline double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBase = 16;
  if (values.size() <= kBase) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

/// Resolves a requested thread count; 0 means "all hardware threads".
inline std::size_t resolve_threads(std::size_t requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs body(block) for block in [0, blocks) on up to `threads` workers.
/// Blocks are claimed in a static round-robin order; callers write results
/// into per-block slots so the reduction order never depends on scheduling.
/// The first exception thrown by any block is rethrown on the caller.
template <typename Body>
void parallel_blocks(std::size_t blocks, std::size_t threads, Body&& body) {
  threads = std::min(resolve_threads(threads), blocks);
  if (threads <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::size_t b = t; b < blocks; b += threads) body(b);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace ineqbias

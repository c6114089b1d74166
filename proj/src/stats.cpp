#include "ptfprg/stats.hpp"

#include <atomic>

namespace ptfprg {

namespace {
std::atomic<unsigned> g_threads{0};
}

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

unsigned worker_threads() noexcept {
  const unsigned set = g_threads.load(std::memory_order_relaxed);
  if (set != 0) return set;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void set_worker_threads(unsigned threads) noexcept {
  g_threads.store(threads, std::memory_order_relaxed);
}

}  // namespace ptfprg

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

namespace ptfprg {

/// Monte Carlo estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Running mean / variance (Welford). Merging follows Chan et al., so a
/// fixed merge order gives bit-identical results.
class Moments {
 public:
  void add(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const Moments& other) noexcept {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count_ + other.count_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * static_cast<double>(other.count_) / total;
    m2_ += other.m2_ + delta * delta * static_cast<double>(count_) *
                           static_cast<double>(other.count_) / total;
    count_ += other.count_;
  }

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  double stderr_of_mean() const noexcept {
    return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }
  Estimate estimate() const noexcept { return {mean_, stderr_of_mean(), count_}; }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values) noexcept;

/// Standard normal CDF.
inline double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Number of worker threads used by Monte Carlo loops: the value set by
/// set_worker_threads, otherwise std::thread::hardware_concurrency().
unsigned worker_threads() noexcept;
void set_worker_threads(unsigned threads) noexcept;

/// Splits [0, count) into fixed chunks of `chunk` items, runs
/// `body(chunk_index, begin, end) -> Acc` on worker threads and merges the
/// per-chunk results pairwise in chunk order. Chunking does not depend on
/// the thread count, so neither does the result.
template <class Acc, class Body>
Acc chunked_reduce(std::uint64_t count, std::uint64_t chunk, Body&& body) {
  const std::uint64_t chunks = chunk == 0 ? 0 : (count + chunk - 1) / chunk;
  std::vector<Acc> parts(chunks);
  auto run = [&](std::uint64_t c) {
    const std::uint64_t begin = c * chunk;
    parts[c] = body(c, begin, std::min(count, begin + chunk));
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(worker_threads(), chunks));
  if (threads <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t c = t; c < chunks; c += threads) run(c);
      });
    }
    for (auto& th : pool) th.join();
  }
  // Pairwise merge: fixed tree over chunk indices.
  for (std::uint64_t stride = 1; stride < chunks; stride *= 2) {
    for (std::uint64_t i = 0; i + stride < chunks; i += 2 * stride) parts[i].merge(parts[i + stride]);
  }
  return chunks == 0 ? Acc{} : std::move(parts[0]);
}

/// Vector of Moments, one per tracked quantity.
struct MomentsVec {
  std::vector<Moments> items;

  MomentsVec() = default;
  explicit MomentsVec(std::size_t size) : items(size) {}

  void merge(const MomentsVec& other) {
    if (items.empty()) items.resize(other.items.size());
    for (std::size_t i = 0; i < other.items.size(); ++i) items[i].merge(other.items[i]);
  }
};

}  // namespace ptfprg

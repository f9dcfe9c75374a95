#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace cex {

using Rng = std::mt19937_64;

/// Seed of stream `index` derived from a master seed (splitmix64 of the pair).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

/// Uniform double in [0, 1) built from the top 53 bits; independent of the
/// standard library's distribution implementation so streams are portable.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Running mean/variance (Welford), mergeable in a fixed order.
class Welford {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  void merge(const Welford& o);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Splits `total` samples over `streams` independent generators and runs
/// `body(stream_index, rng, count)` for each, possibly on `workers` threads.
/// Per-stream accumulators are merged in stream order, so the result depends
/// only on (seed, streams).
Welford run_streams(std::uint64_t seed, int streams, std::uint64_t total,
                    const std::function<void(int, Rng&, std::uint64_t, Welford&)>& body,
                    int workers = -1);

}  // namespace cex

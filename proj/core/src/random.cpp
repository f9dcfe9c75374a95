#include "cex/random.hpp"

#include <algorithm>
#include <thread>

#include "cex/error.hpp"
#include "cex/measurement.hpp"

namespace cex {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

bool Measurement::agrees_with(double target, double k_sigma, double abs_tol) const {
  return std::abs(value - target) <= k_sigma * error + abs_tol;
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void Welford::merge(const Welford& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double d = o.mean_ - mean_;
  const double n = na + nb;
  mean_ += d * nb / n;
  m2_ += o.m2_ + d * d * na * nb / n;
  n_ += o.n_;
}

Welford run_streams(std::uint64_t seed, int streams, std::uint64_t total,
                    const std::function<void(int, Rng&, std::uint64_t, Welford&)>& body,
                    int workers) {
  if (streams < 1) fail_input("stream count must be >= 1");
  if (total == 0) fail_input("Monte Carlo budget is zero");
  std::vector<Welford> acc(static_cast<std::size_t>(streams));
  const auto per = total / static_cast<std::uint64_t>(streams);
  const auto rem = total % static_cast<std::uint64_t>(streams);

  auto run_one = [&](int s) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(s)));
    const std::uint64_t count = per + (static_cast<std::uint64_t>(s) < rem ? 1 : 0);
    body(s, rng, count, acc[static_cast<std::size_t>(s)]);
  };

  int threads = workers > 0 ? workers : streams;
  threads = std::min(threads, streams);
  if (threads <= 1) {
    for (int s = 0; s < streams; ++s) run_one(s);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int s = t; s < streams; s += threads) run_one(s);
      });
    }
    for (auto& th : pool) th.join();
  }

  Welford total_acc;
  for (const auto& a : acc) total_acc.merge(a);
  return total_acc;
}

}  // namespace cex

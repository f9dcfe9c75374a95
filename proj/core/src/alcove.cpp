#include "cex/alcove.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cex/error.hpp"

namespace cex {

double alcove_count(int n, int cells) {
  double c = std::pow(static_cast<double>(cells), n);
  for (int i = 2; i <= n; ++i) c *= i;
  return c;
}

double alcove_count(const std::vector<int>& lo, const std::vector<int>& hi) {
  double c = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) c *= static_cast<double>(hi[i] - lo[i]) * static_cast<double>(i + 1);
  return c;
}

double alcove_integral(int n, double u, int cells,
                       const std::function<double(const double*)>& f) {
  return alcove_integral(std::vector<int>(static_cast<std::size_t>(std::max(n, 0)), 0),
                         std::vector<int>(static_cast<std::size_t>(std::max(n, 0)), cells), u, f);
}

double alcove_integral(const std::vector<int>& lo, const std::vector<int>& hi, double u,
                       const std::function<double(const double*)>& f) {
  const int n = static_cast<int>(lo.size());
  if (n < 1 || n > 8) fail_input("alcove_integral: dimension must be in 1..8");
  if (hi.size() != lo.size()) fail_input("alcove_integral: bound size mismatch");
  for (int i = 0; i < n; ++i) {
    if (hi[static_cast<std::size_t>(i)] <= lo[static_cast<std::size_t>(i)]) return 0.0;
  }
  std::vector<int> k(lo);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::vector<double> x(static_cast<std::size_t>(n));
  double sum = 0.0;
  const double step = 1.0 / (n + 1);
  while (true) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      // perm[r] holds the coordinate whose fractional part has rank r.
      for (int r = 0; r < n; ++r) {
        const auto c = static_cast<std::size_t>(perm[static_cast<std::size_t>(r)]);
        x[c] = (k[c] + (r + 1) * step) * u;
      }
      sum += f(x.data());
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::size_t pos = 0;
    while (pos < k.size() && ++k[pos] == hi[pos]) {
      k[pos] = lo[pos];
      ++pos;
    }
    if (pos == k.size()) break;
  }
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  return sum * std::pow(u, n) / fact;
}

std::optional<int> commensurate_subdivision(double unit, const std::vector<double>& lengths,
                                            int max_m) {
  if (!(unit > 0.0)) return std::nullopt;
  for (int m = 1; m <= max_m; ++m) {
    const double u = unit / m;
    bool ok = true;
    for (double len : lengths) {
      const double q = len / u;
      if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, std::abs(q))) {
        ok = false;
        break;
      }
    }
    if (ok) return m;
  }
  return std::nullopt;
}

}  // namespace cex

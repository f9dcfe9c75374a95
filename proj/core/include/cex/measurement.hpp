#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cex {

enum class Method { exact, quadrature, monte_carlo };

std::string_view to_string(Method m);

/// A number together with its statistical error and how it was obtained.
/// `error` is the standard error of `value`; it is zero for exact results.
struct Measurement {
  double value = 0.0;
  double error = 0.0;
  Method method = Method::exact;
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 0;
  int workers = 1;

  static Measurement exact_value(double v) { return {v, 0.0, Method::exact, {}, 0, 1}; }

  /// |value - target| <= k * error (+ abs_tol for exact paths).
  bool agrees_with(double target, double k_sigma, double abs_tol = 0.0) const;
};

}  // namespace cex

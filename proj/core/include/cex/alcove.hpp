#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace cex {

/// Exact integration over [0, cells*u]^n of a function that is constant on
/// each alcove of the arrangement {x_i in uZ} u {x_i - x_j in uZ}.
///
/// An alcove is fixed by the integer parts k_i = floor(x_i / u) and the order
/// of the fractional parts; it is a simplex of volume u^n / n!. `f` is called
/// once per alcove at an interior point.
double alcove_integral(int n, double u, int cells,
                       const std::function<double(const double*)>& f);

/// Same over the box prod_i [lo_i u, hi_i u] (integer cell bounds).
double alcove_integral(const std::vector<int>& lo, const std::vector<int>& hi, double u,
                       const std::function<double(const double*)>& f);

/// Number of alcoves the integral above visits.
double alcove_count(int n, int cells);
double alcove_count(const std::vector<int>& lo, const std::vector<int>& hi);

/// Smallest m <= max_m with every length/(unit/m) an integer (to 1e-9),
/// i.e. a common grid for all the given lengths.
std::optional<int> commensurate_subdivision(double unit, const std::vector<double>& lengths,
                                            int max_m = 64);

}  // namespace cex

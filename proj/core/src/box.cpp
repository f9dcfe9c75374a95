#include <cmath>

#include "cex/error.hpp"
#include "cex/potential.hpp"

namespace cex {

std::string_view to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::periodic ? "periodic" : "zero";
}

BoundaryCondition parse_bc(std::string_view s) {
  if (s == "periodic" || s == "per") return BoundaryCondition::periodic;
  if (s == "zero" || s == "free" || s == "open") return BoundaryCondition::zero;
  fail_input("unknown boundary condition '" + std::string(s) + "' (periodic|zero)");
}

Box::Box(double ell_, int dim_, BoundaryCondition bc_) : ell(ell_), dim(dim_), bc(bc_) {
  if (!(ell > 0.0) || !std::isfinite(ell)) fail_input("box side must be positive and finite");
  if (dim < 1 || dim > 3) fail_input("box dimension must be 1, 2 or 3");
}

double Box::volume() const { return std::pow(ell, dim); }

double Box::surface() const { return 2.0 * dim * std::pow(ell, dim - 1); }

double Box::distance_to_boundary(const double* q) const {
  double d = HUGE_VAL;
  for (int k = 0; k < dim; ++k) d = std::min(d, ell / 2 - std::abs(q[k]));
  return std::max(d, 0.0);
}

void Box::displacement(const double* qi, const double* qj, double* out) const {
  for (int k = 0; k < dim; ++k) {
    double x = qj[k] - qi[k];
    if (bc == BoundaryCondition::periodic) x -= ell * std::nearbyint(x / ell);
    out[k] = x;
  }
}

double Box::distance(const double* qi, const double* qj) const {
  double x[3];
  displacement(qi, qj, x);
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += x[k] * x[k];
  return std::sqrt(s);
}

bool Box::wrap(double* q) const {
  for (int k = 0; k < dim; ++k) {
    if (bc == BoundaryCondition::periodic) {
      q[k] -= ell * std::floor(q[k] / ell + 0.5);
      if (q[k] <= -ell / 2) q[k] += ell;
    } else if (q[k] <= -ell / 2 || q[k] > ell / 2) {
      return false;
    }
  }
  return true;
}

}  // namespace cex

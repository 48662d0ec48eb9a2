#include "kfp/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kfp {

double prototype_kernel(const Point& p, const Point& p0) {
  const double s = p.t - p0.t;
  if (!(s > 0.0))
    throw std::invalid_argument("prototype_kernel: requires p.t > p0.t");
  const std::size_t m = p.m();
  double val = 1.0;
  const double norm = std::sqrt(3.0) / (2.0 * std::numbers::pi * s * s);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = p.X[i] - p0.X[i];
    const double v = p.Y[i] - p0.Y[i] + p0.X[i] * s;
    const double phi = u * u / s + 3.0 * u * v / (s * s) + 3.0 * v * v / (s * s * s);
    val *= norm * std::exp(-phi);
  }
  return val;
}

int kernel_scaling_exponent(std::size_t m) { return 4 * static_cast<int>(m); }

std::function<double(const Point&)> kernel_boundary_data(
    const ProductDomain& domain, const Point& p0, double scale) {
  if (!(p0.t < domain.T.lo))
    throw std::invalid_argument(
        "kernel_boundary_data: pole must lie strictly before the time slab");
  return [p0, scale](const Point& p) { return prototype_kernel(p, p0) / scale; };
}

}  // namespace kfp

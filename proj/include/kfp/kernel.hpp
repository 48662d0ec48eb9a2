#ifndef KFP_KERNEL_HPP_
#define KFP_KERNEL_HPP_

#include <functional>

#include "kfp/geometry.hpp"
#include "kfp/point.hpp"

namespace kfp {

// Fundamental solution of the prototype operator
//   K = Delta_X + X.grad_Y - d_t
// in the variables of p, with pole p0 (requires p.t > p0.t). Product of
// m two-dimensional Gaussians in the pairs (x_i, y_i); for s = t - t0 the
// pair has mean (x0, y0 - x0 s) and covariance [[2s, -s^2], [-s^2, 2s^3/3]].
// Read in the pole variables this is the Gaussian with mean
// (x, y + x s) and covariance [[2s, s^2], [s^2, 2s^3/3]], i.e. the law of
// the kinetic path (X_s, Y_s) started from p.
double prototype_kernel(const Point& p, const Point& p0);

// Scaling exponent under the anisotropic dilations: kernel(dilate(r,p),
// dilate(r,p0)) = r^{-q} kernel(p,p0) with q = 4m (X ~ r, Y ~ r^3 per pair).
int kernel_scaling_exponent(std::size_t m);

// Boundary-data sampler for benchmarks: g(p) = kernel(p, p0) / scale.
// Requires p0.t < domain.T.lo so the solution is smooth on the closure.
std::function<double(const Point&)> kernel_boundary_data(
    const ProductDomain& domain, const Point& p0, double scale = 1.0);

}  // namespace kfp

#endif  // KFP_KERNEL_HPP_

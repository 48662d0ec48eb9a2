#ifndef KFP_COEFFICIENTS_HPP_
#define KFP_COEFFICIENTS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kfp/geometry.hpp"
#include "kfp/point.hpp"

namespace kfp {

// Coefficient field A(X,Y,t): symmetric m x m, kappa-elliptic, optionally
// equal to the identity outside a fixed box.
struct EllipticMatrixField {
  std::function<Eigen::MatrixXd(const Point&)> eval;
  double kappa = 1.0;
  std::size_t m = 1;
  bool time_dependent = false;   // lets the solver reuse slab factorizations
  bool diagonal = true;          // no cross-derivative terms in assembly
  std::optional<ProductDomain> identity_outside;

  Eigen::MatrixXd operator()(const Point& p) const;
};

struct EllipticityReport {
  double min_eig = 0.0;
  double max_eig = 0.0;
  double symmetric_defect = 0.0;
  bool ok = false;
  Point witness;  // point violating the declared bounds, if any
};

// Samples random points in `box` and checks the eigenvalue range against
// [1/kappa, kappa] (tolerance 1e-10) and symmetry.
EllipticityReport verify_ellipticity(const EllipticMatrixField& A,
                                     const ProductDomain& box, int samples,
                                     unsigned seed = 1234);

// Componentwise convolution with the tensor-product bump
// rho(s) = (15/16)(1-s^2)^2 on |s|<=1, width epsilon, in all 2m+1
// variables. Fixed 5-point Gauss per half-support per axis.
EllipticMatrixField mollify(const EllipticMatrixField& A, double epsilon);

// Built-in families. params meaning:
//   constant:     row-major entries of the SPD matrix (or empty -> I)
//   checkerboard: [a, b]; diag alternates (a,b,..)/(b,a,..) with sign(x_1)
//   rotated:      [a, b, theta] (m=2): R(theta) diag(a,b) R(theta)^T
//   periodic:     [a, amp, freq]; diag a*(1 + amp*sin(freq*(x+y+t)))
EllipticMatrixField make_coefficient_field(const std::string& family,
                                           double kappa,
                                           const std::vector<double>& params,
                                           std::size_t m);

EllipticMatrixField identity_field(std::size_t m);

}  // namespace kfp

#endif  // KFP_COEFFICIENTS_HPP_

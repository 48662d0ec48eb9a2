#ifndef KFP_SPACES_HPP_
#define KFP_SPACES_HPP_

#include <memory>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "kfp/grid.hpp"

namespace kfp {

// Discrete norms of the anisotropic solution space:
//   w_norm = ||u||_{L^2(V, H^1_X)} + ||(-X.grad_Y + d_t)u||_{L^2(V, H^-1_X)}.
struct NormReport {
  double l2 = 0.0;
  double h1x = 0.0;
  double h1x_dual = 0.0;       // dual norm of u itself, aggregated
  double transport_dual = 0.0;
  double w_norm = 0.0;
};

// Per-X-slice operators shared by the dual-norm and eigenvalue routines:
// stiffness G^T W G with Dirichlet walls on dU_X, lumped mass diag(vol),
// and a factorization of the Riesz map stiff + mass.
class SliceOps {
 public:
  explicit SliceOps(const Grid& g);

  const Eigen::SparseMatrix<double>& stiffness() const { return stiff_; }
  const Eigen::VectorXd& volumes() const { return vol_; }

  // ||f||_{H^-1} realized by the Riesz solve (stiff + mass) w = mass f,
  // returning sqrt(<f, w>_mass).
  double dual_norm(const Eigen::VectorXd& f_slice) const;
  // Riesz representer w itself.
  Eigen::VectorXd riesz(const Eigen::VectorXd& f_slice) const;
  // Smallest eigenvalue of mass^-1 stiff (Dirichlet X-Laplacian).
  double min_eigenvalue(int max_iter = 200, double tol = 1e-12) const;

 private:
  Eigen::SparseMatrix<double> stiff_;
  Eigen::VectorXd vol_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> riesz_;
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> stiff_fac_;
};

// Slice-wise H^1_X norm aggregated in L^2 over (Y,t):
// per slice ||u||_{L^2(U_X)} + ||grad_X u||_{L^2(U_X)}.
double h1x_norm(const Grid& g, const DiscreteField& u);

// Dual norm of one slice (values over all X cells at one (Y,t) node).
double h1x_dual_norm(const Grid& g, const Eigen::VectorXd& f_slice);

// Transport field (-X.grad_Y + d_t)u with the assembly stencils (upwind in
// Y keyed to sign(x), backward in t; one-sided fallbacks on the outermost
// layers where the preferred neighbor does not exist).
DiscreteField transport_apply(const Grid& g, const DiscreteField& u);

NormReport w_norm(const Grid& g, const DiscreteField& u);

// Aggregated L^2(V, H^-1_X) norm of a field (used for g* in energy ratios).
double transport_free_dual_norm(const Grid& g, const DiscreteField& f);

// Best Poincare constant of the Dirichlet X-slice problem,
// lambda_min^{-1/2}; independent of the (Y,t) resolution.
double poincare_constant_x(const Grid& g);

struct KineticPoincareReport {
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
};

// Sampled lower bound for the kinetic Poincare constant: random fields
// vanishing on the Kolmogorov part of the (Y,t) boundary, ratio
// ||f|| / (||grad_X f|| + ||(-X.grad_Y + d_t)f||_{H^-1}).
KineticPoincareReport kinetic_poincare_check(const Grid& g, int trials,
                                             unsigned seed = 2024);

// Ratio for one given field (no vanishing constraint applied).
double kinetic_poincare_ratio(const Grid& g, const DiscreteField& f);

}  // namespace kfp

#endif  // KFP_SPACES_HPP_

#ifndef KFP_VARIATIONAL_HPP_
#define KFP_VARIATIONAL_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Sparse>

#include "kfp/assemble.hpp"
#include "kfp/grid.hpp"

namespace kfp {

// Staggered X-face geometry for the flux variable j. Faces are enumerated
// per X-slice (geometry is (Y,t)-independent); the same layout is stamped
// at every (Y,t) node. Faces with no active neighbor are dropped.
struct FaceGeom {
  enum Type : std::uint8_t { Interior = 0, WallLo = 1, WallHi = 2 };
  std::size_t axis = 0;
  Type type = Interior;
  std::size_t lo = 0;   // X linear index below the face (valid unless WallLo)
  std::size_t hi = 0;   // X linear index above the face (valid unless WallHi)
  double d = 0.0;       // gradient distance (center-center or center-face)
  double coord = 0.0;   // axial coordinate of the face
  double omega = 0.0;   // quadrature weight (face share of the cell volumes)
};

class FaceLayout {
 public:
  explicit FaceLayout(const Grid& g);

  const Grid& grid() const { return *grid_; }
  const std::vector<FaceGeom>& faces() const { return faces_; }
  std::size_t per_slice() const { return faces_.size(); }
  std::size_t total() const {
    return faces_.size() * grid_->ny_total() * grid_->t.n();
  }
  // Face of cell `ix` on the lo/hi side of `axis`, as a per-slice index.
  std::size_t slice_face(std::size_t axis, const std::vector<std::size_t>& ix,
                         bool hi_side) const;
  std::size_t global_index(std::size_t slice_face_idx, std::size_t yi,
                           std::size_t ti) const {
    return (ti * grid_->ny_total() + yi) * faces_.size() + slice_face_idx;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  const Grid* grid_;
  std::vector<FaceGeom> faces_;
  std::vector<std::vector<std::size_t>> axis_map_;  // dense position -> face
};

// Flux field: one value per face per (Y,t) node.
struct FaceField {
  const FaceLayout* layout = nullptr;
  Eigen::VectorXd values;

  FaceField() = default;
  explicit FaceField(const FaceLayout& fl)
      : layout(&fl),
        values(Eigen::VectorXd::Zero(static_cast<long>(fl.total()))) {}
};

// Discrete X-gradient of f stamped on faces; wall faces close against the
// Dirichlet data gbc evaluated at the face point.
FaceField gradient_faces(const FaceLayout& fl, const DiscreteField& f,
                         const PointFn& gbc);

// The quadratic functional: sum over (Y,t) nodes and faces of
// w_yt * omega * (1/2) A_f (D f - j)^2, with D closing walls against gbc.
double functional_value(const FaceLayout& fl, const EllipticMatrixField& A,
                        const PointFn& gbc, const DiscreteField& f,
                        const FaceField& j);

// Divergence-constraint rows tested against nodal hats: one row per grid
// node over the stacked unknown [f; j]. Kolmogorov rows pin f to the data,
// inactive rows pin f to zero, and the remaining rows are the direct
// scheme's equations with A.Df replaced by A.j.
struct ConstraintSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::size_t f_count = 0;
  std::size_t j_count = 0;
};

ConstraintSystem build_constraints(const Grid& g, const FaceLayout& fl,
                                   const ProblemData& prob);

struct MinimizerPair {
  DiscreteField f;
  FaceField j;
  double objective = 0.0;            // value of the functional at (f, j)
  double constraint_residual = 0.0;  // max-norm residual of the rows
  double kkt_residual = 0.0;         // relative residual of the KKT solve
};

struct JReport {
  double value = 0.0;
  double constraint_residual = 0.0;
};

// Inner minimization over the constrained flux with f held fixed; fstar is
// the source and prob.g supplies the Dirichlet closure on the X walls.
JReport evaluate_J(const Grid& g, const ProblemData& prob,
                   const DiscreteField& f);

// Joint equality-constrained convex minimization over (f, j) by one sparse
// KKT solve. At the optimum f equals the direct solution and j its
// discrete gradient.
MinimizerPair minimize_joint(const Grid& g, const ProblemData& prob);

struct ConvexityReport {
  std::vector<double> ratios;
  double min_ratio = 0.0;
};

// Empirical coercivity constant: random pairs projected onto the
// homogeneous constraint set, ratio functional / (||f||_W^2 + ||j||^2).
ConvexityReport convexity_certificate(const Grid& g,
                                      const EllipticMatrixField& A, int trials,
                                      unsigned seed = 7);

// ||u - g||_{L^2(V,H^1_X)} / (||g||_W + dual(g*)).
double energy_estimate_ratio(const Grid& g, const ProblemData& prob,
                             const DiscreteField& u);

// Sign identity for the transport form on fields vanishing at Kolmogorov
// nodes: volume quadrature of (X.grad_Y - d_t)f . f equals the Free-face
// boundary quadrature of (1/2) f^2 (X,-1).N minus a nonnegative
// dissipation, exactly at the summation-by-parts level.
struct SignIdentityReport {
  double volume = 0.0;
  double boundary = 0.0;
  double dissipation = 0.0;
};

SignIdentityReport apa_plus_identity(const Grid& g, const DiscreteField& f);

}  // namespace kfp

#endif  // KFP_VARIATIONAL_HPP_

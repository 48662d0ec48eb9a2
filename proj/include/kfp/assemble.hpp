#ifndef KFP_ASSEMBLE_HPP_
#define KFP_ASSEMBLE_HPP_

#include <functional>

#include <Eigen/Sparse>

#include "kfp/coefficients.hpp"
#include "kfp/grid.hpp"

namespace kfp {

using PointFn = std::function<double(const Point&)>;

// One Cauchy-Dirichlet problem: L u = g* with u = g on the Kolmogorov
// boundary. g supplies the data both at Kolmogorov nodes and on dU_X
// (evaluated at X-face points during assembly).
struct ProblemData {
  EllipticMatrixField A;
  PointFn g;
  PointFn gstar;
  bool no_diffusion = false;  // pure-transport mode for stencil tests
};

struct SolveOptions {
  double tol = 1e-10;        // relative algebraic residual per slab
  bool monolithic = false;   // all-at-once space-time solve
  bool compute_norms = true; // fill W-norm and energy ratio in the report
};

struct SolveReport {
  double algebraic_residual = 0.0;  // max relative residual over slabs
  double weak_residual = 0.0;
  double w_norm = 0.0;              // ||u||_W of the solution
  double energy_ratio = 0.0;        // ||u||_W / (||g||_W + dual(g*))
  int iterations = 0;
  double wall_time_s = 0.0;
  std::size_t unknowns = 0;
};

// Assembled space-time system: Kolmogorov rows are identity rows with the
// data on the right-hand side; other active rows carry -L_h u = -g*.
struct SparseOperator {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<std::size_t> rows;  // global node index per row
};

SparseOperator assemble_monolithic(const Grid& g, const ProblemData& prob);

// Time-marching solve (block lower triangular in t): backward-implicit
// slabs, sparse LU per slab, factorization reused when the coefficients
// are time-independent and the time grid uniform.
DiscreteField solve_direct(const Grid& g, const ProblemData& prob,
                           SolveReport* report = nullptr,
                           const SolveOptions& opts = {});

// Dense brute-force solve of the monolithic system (oracle for tiny grids).
DiscreteField solve_monolithic_dense(const Grid& g, const ProblemData& prob);

// Max over nodal test hats (vanishing on dU_X) of |<L_h u - g*, phi>| /
// ||phi||_{H^1_X-slice}.
double weak_residual(const Grid& g, const ProblemData& prob,
                     const DiscreteField& u);

// Time + transport coefficients of the row at a non-Kolmogorov node
// (ti >= 1): the emit callback receives (node index, coefficient) pairs of
// (d_t - X.grad_Y)u with the scheme's upwind/backward stencils. Used by the
// variational constraint assembly so both paths share one discretization.
void transport_time_row(const Grid& g, std::size_t xi, std::size_t yi,
                        std::size_t ti,
                        const std::function<void(std::size_t, double)>& emit);

// Volume-weighted diffusion block over one X-slice (symmetric by
// construction; exposed for the transpose-symmetry check). A is evaluated
// at (X, yt_point).
Eigen::SparseMatrix<double> diffusion_block_weighted(
    const Grid& g, const EllipticMatrixField& A, const Point& yt_point);

}  // namespace kfp

#endif  // KFP_ASSEMBLE_HPP_

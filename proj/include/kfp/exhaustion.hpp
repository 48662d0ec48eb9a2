#ifndef KFP_EXHAUSTION_HPP_
#define KFP_EXHAUSTION_HPP_

#include <vector>

#include "kfp/assemble.hpp"
#include "kfp/geometry.hpp"
#include "kfp/grid.hpp"

namespace kfp {

// Smooth cutoff phi_R in X for the exhaustion data: 1 where the scaled
// graph-box distance rho(X) = max(max_{i<m} |x_i|, |x_m|/(4M)) is <= R/2,
// 0 where rho >= 3R/4, cubic smoothstep ramp between.
double cutoff_value(const LipschitzGraphDomain& omega, const Point& p,
                    double R);

// Data with the cutoff applied, g_R = g phi_R.
PointFn cutoff_data(const LipschitzGraphDomain& omega, const PointFn& g,
                    double R);

// Grid points for one axis of the exhaustion grid: uniform spacing across
// the probe core, geometrically stretched toward the domain ends so the
// core resolution is identical for every R.
std::vector<double> stretched_points(double lo, double hi, double core_lo,
                                     double core_hi, std::size_t core_n,
                                     double stretch);

struct ExhaustionOptions {
  std::size_t core_cells = 8;   // X cells across the probe box, per axis
  std::size_t core_nodes = 8;   // Y nodes across the probe box, per axis
  std::size_t core_tnodes = 8;  // t nodes across the probe box
  double stretch = 1.35;
  SolveOptions solve;
};

struct ExhaustionStep {
  double R = 0.0;
  DiscreteField probe_values;    // restriction to the shared probe grid
  double sup_difference = 0.0;   // vs the previous step (0 for the first)
  double sup_norm = 0.0;         // max |u_R| over the R-grid
  double data_sup = 0.0;         // max |g_R| over Kolmogorov nodes
  SolveReport report;
};

struct ExhaustionResult {
  Grid probe_grid;
  std::vector<ExhaustionStep> steps;
  bool differences_monotone = true;  // nonincreasing after the first step
  bool max_principle_ok = true;      // sup|u_R| <= sup|g_R| each step
};

// Increasing-domain solves of L u = g* on Omega x R^m x R: for each R in
// the (strictly increasing) list, solves on exhaustion_domain(R) with
// cutoff data and restricts to the probe box. The probe must lie inside
// the smallest domain and above the graph.
ExhaustionResult solve_exhaustion(const LipschitzGraphDomain& omega,
                                  const std::vector<Interval>& V_Y,
                                  const Interval& T, const PointFn& g,
                                  const PointFn& gstar,
                                  const EllipticMatrixField& A,
                                  const std::vector<double>& R_list,
                                  const ProductDomain& probe,
                                  const ExhaustionOptions& opts = {});

}  // namespace kfp

#endif  // KFP_EXHAUSTION_HPP_

#ifndef KFP_GRID_HPP_
#define KFP_GRID_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "kfp/geometry.hpp"
#include "kfp/point.hpp"

namespace kfp {

// Cell-centered axis (X directions): n cells given by n+1 face coordinates.
struct CellAxis {
  std::vector<double> faces;    // size n+1, strictly increasing
  std::vector<double> centers;  // size n
  std::vector<double> widths;   // size n

  std::size_t n() const { return centers.size(); }
  static CellAxis uniform(double lo, double hi, std::size_t n);
  static CellAxis from_faces(std::vector<double> faces);
};

// Vertex-centered axis (Y and t directions) with trapezoid weights.
struct NodeAxis {
  std::vector<double> nodes;    // size n, strictly increasing
  std::vector<double> weights;  // trapezoid quadrature weights, size n

  std::size_t n() const { return nodes.size(); }
  static NodeAxis uniform(double lo, double hi, std::size_t n);
  static NodeAxis from_nodes(std::vector<double> nodes);
};

enum class NodeClass : std::uint8_t { Interior = 0, Kolmogorov = 1, Free = 2, Inactive = 3 };

// Tensor grid over U_X x V_{Y,t}: cell-centered in X (no node sits on
// dU_X), vertex-centered in (Y,t). Node linear index runs X fastest,
// then Y, then t.
struct Grid {
  std::size_t m = 1;
  std::vector<CellAxis> x;  // m axes
  std::vector<NodeAxis> y;  // m axes
  NodeAxis t;
  std::vector<NodeClass> cls;       // per node
  std::vector<std::uint8_t> xmask;  // per X multi-index; empty = all active
  std::optional<LipschitzGraphDomain> graph;  // set for cut-cell grids

  std::size_t nx_total() const;  // product of x counts
  std::size_t ny_total() const;  // product of y counts
  std::size_t nxy() const { return nx_total() * ny_total(); }
  std::size_t size() const { return nxy() * t.n(); }

  std::size_t x_index(const std::vector<std::size_t>& ix) const;
  std::size_t y_index(const std::vector<std::size_t>& iy) const;
  std::size_t node(std::size_t xi, std::size_t yi, std::size_t ti) const {
    return (ti * ny_total() + yi) * nx_total() + xi;
  }
  void x_unindex(std::size_t xi, std::vector<std::size_t>& ix) const;
  void y_unindex(std::size_t yi, std::vector<std::size_t>& iy) const;

  Point point(std::size_t node_idx) const;
  Point point(std::size_t xi, std::size_t yi, std::size_t ti) const;
  bool x_active(std::size_t xi) const {
    return xmask.empty() || xmask[xi] != 0;
  }
  NodeClass node_class(std::size_t idx) const { return cls[idx]; }

  // Cell volume (X) and (Y,t) quadrature weight at a node.
  double x_volume(std::size_t xi) const;
  double yt_weight(std::size_t yi, std::size_t ti) const;

  std::size_t count(NodeClass c) const;
};

// Uniform grid over a product domain; counts are per-axis
// (nx[0..m-1], ny[0..m-1], nt), each >= 3 and nt >= 2 time layers beyond
// the data layer (nt >= 3). Throws on degenerate boxes or tiny counts.
Grid build_grid(const ProductDomain& domain, const std::vector<std::size_t>& nx,
                const std::vector<std::size_t>& ny, std::size_t nt);

// Same, but with explicit axes (used by the exhaustion module for
// stretched grids) and an optional Lipschitz-graph cut: X cells whose
// center lies below psi are deactivated.
Grid build_grid_axes(std::vector<CellAxis> x, std::vector<NodeAxis> y,
                     NodeAxis t,
                     const std::optional<LipschitzGraphDomain>& graph = {});

// Grid function: one scalar per node (inactive nodes carry 0).
struct DiscreteField {
  const Grid* grid = nullptr;
  Eigen::VectorXd values;

  DiscreteField() = default;
  explicit DiscreteField(const Grid& g)
      : grid(&g), values(Eigen::VectorXd::Zero(static_cast<long>(g.size()))) {}
  double& operator[](std::size_t i) { return values[static_cast<long>(i)]; }
  double operator[](std::size_t i) const { return values[static_cast<long>(i)]; }
};

// Central (one-sided at walls and cut cells) gradient stencil in x-axis
// `a` at cell `ix`: pairs (x linear index, coefficient).
void x_gradient_stencil(const Grid& g, std::size_t a,
                        const std::vector<std::size_t>& ix,
                        std::vector<std::pair<std::size_t, double>>& out);

// Samples a point function into a field (inactive nodes left at 0).
DiscreteField sample_field(const Grid& g,
                           const std::function<double(const Point&)>& f);

// Multilinear interpolation of a field at an arbitrary point inside the
// grid's bounding box (clamped to the outermost node/cell layer).
double interpolate(const DiscreteField& u, const Point& p);

}  // namespace kfp

#endif  // KFP_GRID_HPP_

#ifndef KFP_GEOMETRY_HPP_
#define KFP_GEOMETRY_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kfp/point.hpp"

namespace kfp {

// Axis-aligned interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Bounded product domain U_X x V_{Y,t}: a box in X times a box in (Y, t).
// The last entry of V_Yt is the time interval.
struct ProductDomain {
  std::vector<Interval> U_X;   // m intervals
  std::vector<Interval> V_Y;   // m intervals
  Interval T;                  // time interval

  std::size_t m() const { return U_X.size(); }
  bool contains(const Point& p) const;
  void validate() const;  // throws std::invalid_argument on degenerate boxes
};

// Unbounded domain Omega = {x_m > psi(x)} with psi Lipschitz with constant M.
// psi acts on the first m-1 coordinates; for m = 1 it is a constant.
struct LipschitzGraphDomain {
  std::function<double(const std::vector<double>&)> psi;
  double M = 0.0;         // declared Lipschitz constant
  std::string family;     // "plane" | "cone" | "sine"
  std::vector<double> params;

  double height(const std::vector<double>& x_head) const { return psi(x_head); }
};

LipschitzGraphDomain make_graph_domain(const std::string& family, double M,
                                       const std::vector<double>& params,
                                       std::size_t m);

enum class BoundaryClass { Kolmogorov, Free };

// A face of the (Y,t) box, identified by axis and side. axis < m is a
// y-axis face, axis == m the time face. side -1 is the lower face.
struct YtFace {
  int axis = 0;
  int side = +1;
  std::vector<double> normal(std::size_t m) const;  // N_{Y,t} in R^{m+1}
};

// Sign rule on the (Y,t) boundary: Kolmogorov iff (X,-1).N_{Y,t} > 0.
// X-boundary points (on dU_X) are always Kolmogorov.
BoundaryClass classify_boundary(const YtFace& face, const std::vector<double>& X);
double inflow_indicator(const YtFace& face, const std::vector<double>& X);  // (X,-1).N

// Group operations for the dilation/translation structure of the operator.
Point compose(const Point& p, const Point& q);
Point inverse(const Point& p);
Point dilate(double r, const Point& p);  // throws on r <= 0
double homogeneous_norm(const Point& p);
double quasi_distance(const Point& p, const Point& q);

// Empirical quasi-triangle constant: max over random triples of
// d(p,q) / (d(p,w) + d(w,q)).
double measure_quasi_triangle_constant(std::size_t m, int triples, unsigned seed);

// Exhaustion domain U_X^R x V^R for Omega x R^m x R:
//   U_X^R = Omega cap {|x_i| < R, psi(x) < x_m < 4MR},
//   V^R   = (R^3 Y-box) x (R^2 t-box).
// Returned as the bounding box; the graph cut below psi is applied by the
// grid builder. Requires R > 0.
ProductDomain exhaustion_domain(const LipschitzGraphDomain& omega,
                                const std::vector<Interval>& V_Y,
                                const Interval& T, double R);

// JSON (de)serialization of domains, see the formats in config.hpp.
std::string domain_to_json(const ProductDomain& d);
ProductDomain domain_from_json(const std::string& text);

}  // namespace kfp

#endif  // KFP_GEOMETRY_HPP_

#ifndef KFP_POINT_HPP_
#define KFP_POINT_HPP_

#include <vector>
#include <cstddef>

namespace kfp {

// A point (X, Y, t) in R^m x R^m x R. Plain Cartesian storage; the
// non-Euclidean group structure lives in the operations of geometry.hpp.
struct Point {
  std::vector<double> X;
  std::vector<double> Y;
  double t = 0.0;

  Point() = default;
  Point(std::vector<double> X_, std::vector<double> Y_, double t_);

  std::size_t m() const { return X.size(); }
  bool finite() const;
};

Point origin(std::size_t m);

}  // namespace kfp

#endif  // KFP_POINT_HPP_

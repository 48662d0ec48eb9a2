#ifndef KFP_STOCHASTIC_HPP_
#define KFP_STOCHASTIC_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "kfp/assemble.hpp"
#include "kfp/coefficients.hpp"
#include "kfp/geometry.hpp"
#include "kfp/point.hpp"

namespace kfp {

// Philox4x32-10 counter-based generator: deterministic per (seed, stream)
// regardless of thread schedule; stream is the path index.
class PhiloxRng {
 public:
  PhiloxRng(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  double uniform();   // in (0, 1)
  double gaussian();  // Box-Muller, one value cached

 private:
  void refill();

  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> block_;
  int idx_ = 4;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

// One path of the kinetic process dX = sqrt(2A) dB, dY = X dt, run in
// elapsed time s while calendar time decreases as t - s.
struct PathState {
  std::vector<double> X, Y;
  double s = 0.0;
  bool alive = true;
  Point exit_point;    // valid once !alive
  int exit_face = -1;  // canonical patch index, see below

  PathState(const Point& start);
};

// Canonical boundary patches: X faces (axis, lo/hi) occupy [0, 2m),
// inflow Y faces [2m, 4m), the initial-time face is 4m.
std::size_t patch_count(std::size_t m);
int x_patch(std::size_t axis, bool hi);
int y_patch(std::size_t m, std::size_t axis, bool hi);
int time_patch(std::size_t m);

// Cholesky-like factor S with S S^T = 2A evaluated at `where`
// (constant-A oracle: the field must not vary).
Eigen::MatrixXd sqrt_2A(const EllipticMatrixField& A, const Point& where);

// Euler-Maruyama step: X += S xi sqrt(dt), Y += X_old dt (or the
// trapezoid average when requested), s += dt.
void step(PathState& state, double dt, const Eigen::MatrixXd& sqrt2A,
          const Eigen::VectorXd& xi, bool trapezoid = false);

struct McOptions {
  std::size_t paths = 10000;
  double dt = 0.0;  // <= 0: (t - t_min)/2048
  std::uint64_t seed = 1;
  bool antithetic = false;
  bool trapezoid = false;
  std::size_t max_resamples = 1000;  // per path, before declaring it lost
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double lost_fraction = 0.0;
  std::size_t resampled = 0;  // total Free-face rejection events
  std::size_t paths = 0;
};

// u(start) = E[phi(exit)] under the parabolic measure; exits follow the
// Kolmogorov sign rule (lateral X faces, inflow Y faces, initial time).
McEstimate estimate_solution(const ProductDomain& domain,
                             const EllipticMatrixField& A, const PointFn& phi,
                             const Point& start, const McOptions& opts = {});

struct MeasureEstimate {
  std::vector<double> masses;  // per canonical patch
  double lost_fraction = 0.0;
  std::size_t resampled = 0;
  std::size_t paths = 0;
};

MeasureEstimate estimate_parabolic_measure(const ProductDomain& domain,
                                           const EllipticMatrixField& A,
                                           const Point& start,
                                           const McOptions& opts = {});

}  // namespace kfp

#endif  // KFP_STOCHASTIC_HPP_

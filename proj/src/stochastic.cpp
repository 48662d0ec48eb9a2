#include "kfp/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kfp {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

void philox10(std::array<std::uint32_t, 4>& x, std::array<std::uint32_t, 2> k) {
  for (int r = 0; r < 10; ++r) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * x[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
}

}  // namespace

PhiloxRng::PhiloxRng(std::uint64_t seed, std::uint64_t stream)
    : counter_{0, 0, static_cast<std::uint32_t>(stream),
               static_cast<std::uint32_t>(stream >> 32)},
      key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)} {}

void PhiloxRng::refill() {
  block_ = counter_;
  philox10(block_, key_);
  if (++counter_[0] == 0) ++counter_[1];
  idx_ = 0;
}

std::uint32_t PhiloxRng::next_u32() {
  if (idx_ >= 4) refill();
  return block_[static_cast<std::size_t>(idx_++)];
}

double PhiloxRng::uniform() {
  return (static_cast<double>(next_u32()) + 0.5) * 0x1p-32;
}

double PhiloxRng::gaussian() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  cached_ = r * std::sin(a);
  have_cached_ = true;
  return r * std::cos(a);
}

PathState::PathState(const Point& start)
    : X(start.X), Y(start.Y), exit_point(start) {}

std::size_t patch_count(std::size_t m) { return 4 * m + 1; }
int x_patch(std::size_t axis, bool hi) {
  return static_cast<int>(2 * axis) + (hi ? 1 : 0);
}
int y_patch(std::size_t m, std::size_t axis, bool hi) {
  return static_cast<int>(2 * m + 2 * axis) + (hi ? 1 : 0);
}
int time_patch(std::size_t m) { return static_cast<int>(4 * m); }

Eigen::MatrixXd sqrt_2A(const EllipticMatrixField& A, const Point& where) {
  Eigen::MatrixXd twoA = 2.0 * A(where);
  Eigen::LLT<Eigen::MatrixXd> llt(twoA);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("sqrt_2A: coefficient matrix not positive definite");
  return llt.matrixL();
}

void step(PathState& state, double dt, const Eigen::MatrixXd& sqrt2A,
          const Eigen::VectorXd& xi, bool trapezoid) {
  const std::size_t m = state.X.size();
  const double sdt = std::sqrt(dt);
  Eigen::VectorXd dX = sqrt2A * xi * sdt;
  for (std::size_t i = 0; i < m; ++i) {
    const double xold = state.X[i];
    const double xnew = xold + dX[static_cast<long>(i)];
    state.Y[i] += (trapezoid ? 0.5 * (xold + xnew) : xold) * dt;
    state.X[i] = xnew;
  }
  state.s += dt;
}

namespace {

struct PathOutcome {
  Point exit;
  int face = -1;
  bool lost = false;
  std::size_t resamples = 0;
};

// Runs one path until it leaves through the Kolmogorov boundary. Free-face
// crossings are rejection-resampled (counted); exceeding the cap loses the
// path.
PathOutcome run_path(const ProductDomain& dom, const Point& start,
                     const Eigen::MatrixXd& sqrt2A, const McOptions& opts,
                     double dt, PhiloxRng& rng, double sign, bool trapezoid) {
  const std::size_t m = start.m();
  PathOutcome out;
  PathState st(start);
  Eigen::VectorXd xi(static_cast<long>(m));
  const double tmin = dom.T.lo;
  while (true) {
    const double remaining = (start.t - st.s) - tmin;
    if (remaining <= 1e-15) {
      out.exit = Point{st.X, st.Y, tmin};
      out.face = time_patch(m);
      return out;
    }
    const double h = std::min(dt, remaining);
    bool accepted = false;
    while (!accepted) {
      for (long i = 0; i < static_cast<long>(m); ++i)
        xi[i] = sign * rng.gaussian();
      PathState trial = st;
      step(trial, h, sqrt2A, xi, trapezoid);
      const double t_exit = start.t - trial.s;
      // Lateral X exit: the whole X wall is Kolmogorov.
      int xface = -1;
      for (std::size_t i = 0; i < m && xface < 0; ++i) {
        if (trial.X[i] < dom.U_X[i].lo) xface = x_patch(i, false);
        else if (trial.X[i] > dom.U_X[i].hi) xface = x_patch(i, true);
      }
      if (xface >= 0) {
        Point e{trial.X, trial.Y, t_exit};
        for (std::size_t i = 0; i < m; ++i) {
          e.X[i] = std::clamp(e.X[i], dom.U_X[i].lo, dom.U_X[i].hi);
          e.Y[i] = std::clamp(e.Y[i], dom.V_Y[i].lo, dom.V_Y[i].hi);
        }
        out.exit = e;
        out.face = xface;
        return out;
      }
      // Y-face crossings: inflow (sign rule) faces absorb, Free faces
      // trigger a resample of the whole step.
      bool free_hit = false;
      int yface = -1;
      std::size_t yaxis = 0;
      bool yhi = false;
      for (std::size_t i = 0; i < m; ++i) {
        const bool lo_hit = trial.Y[i] < dom.V_Y[i].lo;
        const bool hi_hit = trial.Y[i] > dom.V_Y[i].hi;
        if (!lo_hit && !hi_hit) continue;
        // Face +y_i has N = +e_i: (X,-1).N = x_i; inflow iff x_i > 0.
        // Face -y_i: inflow iff x_i < 0.
        const bool inflow = hi_hit ? trial.X[i] > 0.0 : trial.X[i] < 0.0;
        if (!inflow) {
          free_hit = true;
          break;
        }
        if (yface < 0) {
          yaxis = i;
          yhi = hi_hit;
          yface = y_patch(m, i, hi_hit);
        }
      }
      if (free_hit) {
        ++out.resamples;
        if (out.resamples > opts.max_resamples) {
          out.lost = true;
          return out;
        }
        continue;  // redraw this step
      }
      if (yface >= 0) {
        Point e{trial.X, trial.Y, t_exit};
        e.Y[yaxis] = yhi ? dom.V_Y[yaxis].hi : dom.V_Y[yaxis].lo;
        for (std::size_t i = 0; i < m; ++i)
          if (i != yaxis)
            e.Y[i] = std::clamp(e.Y[i], dom.V_Y[i].lo, dom.V_Y[i].hi);
        out.exit = e;
        out.face = yface;
        return out;
      }
      st = trial;
      accepted = true;
    }
  }
}

void check_constant(const EllipticMatrixField& A, const ProductDomain& dom,
                    const Point& start) {
  Point other = start;
  for (std::size_t i = 0; i < start.m(); ++i) {
    other.X[i] = 0.5 * (dom.U_X[i].lo + dom.U_X[i].hi);
    other.Y[i] = 0.5 * (dom.V_Y[i].lo + dom.V_Y[i].hi);
  }
  other.t = dom.T.lo;
  if (((A(start) - A(other)).cwiseAbs().maxCoeff()) > 1e-12 ||
      A.time_dependent)
    throw std::invalid_argument(
        "stochastic estimator requires constant coefficients");
}

double resolve_dt(const ProductDomain& dom, const Point& start,
                  const McOptions& opts) {
  if (opts.dt > 0.0) return opts.dt;
  const double span = start.t - dom.T.lo;
  return span > 0 ? span / 2048.0 : 1.0;
}

}  // namespace

McEstimate estimate_solution(const ProductDomain& domain,
                             const EllipticMatrixField& A, const PointFn& phi,
                             const Point& start, const McOptions& opts) {
  check_constant(A, domain, start);
  const Eigen::MatrixXd S = sqrt_2A(A, start);
  const double dt = resolve_dt(domain, start, opts);
  McEstimate est;
  est.paths = opts.paths;
  double sum = 0.0, sumsq = 0.0;
  std::size_t kept = 0, lost = 0;
  for (std::size_t p = 0; p < opts.paths; ++p) {
    const std::uint64_t stream = opts.antithetic ? p / 2 : p;
    const double sign = (opts.antithetic && (p % 2 == 1)) ? -1.0 : 1.0;
    PhiloxRng rng(opts.seed, stream);
    PathOutcome o =
        run_path(domain, start, S, opts, dt, rng, sign, opts.trapezoid);
    est.resampled += o.resamples;
    if (o.lost) {
      ++lost;
      continue;
    }
    const double v = phi(o.exit);
    sum += v;
    sumsq += v * v;
    ++kept;
  }
  est.lost_fraction = static_cast<double>(lost) / static_cast<double>(opts.paths);
  if (kept > 0) {
    est.mean = sum / static_cast<double>(kept);
    const double var =
        std::max(0.0, sumsq / static_cast<double>(kept) - est.mean * est.mean);
    est.std_error = kept > 1 ? std::sqrt(var / static_cast<double>(kept - 1)) : 0.0;
  }
  return est;
}

MeasureEstimate estimate_parabolic_measure(const ProductDomain& domain,
                                           const EllipticMatrixField& A,
                                           const Point& start,
                                           const McOptions& opts) {
  check_constant(A, domain, start);
  const std::size_t m = start.m();
  const Eigen::MatrixXd S = sqrt_2A(A, start);
  const double dt = resolve_dt(domain, start, opts);
  MeasureEstimate est;
  est.paths = opts.paths;
  std::vector<std::size_t> counts(patch_count(m), 0);
  std::size_t lost = 0;
  for (std::size_t p = 0; p < opts.paths; ++p) {
    const std::uint64_t stream = opts.antithetic ? p / 2 : p;
    const double sign = (opts.antithetic && (p % 2 == 1)) ? -1.0 : 1.0;
    PhiloxRng rng(opts.seed, stream);
    PathOutcome o =
        run_path(domain, start, S, opts, dt, rng, sign, opts.trapezoid);
    est.resampled += o.resamples;
    if (o.lost) {
      ++lost;
      continue;
    }
    ++counts[static_cast<std::size_t>(o.face)];
  }
  est.lost_fraction = static_cast<double>(lost) / static_cast<double>(opts.paths);
  est.masses.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    est.masses[i] =
        static_cast<double>(counts[i]) / static_cast<double>(opts.paths);
  return est;
}

}  // namespace kfp

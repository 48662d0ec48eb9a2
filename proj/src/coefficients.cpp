#include "kfp/coefficients.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace kfp {

Eigen::MatrixXd EllipticMatrixField::operator()(const Point& p) const {
  if (identity_outside && !identity_outside->contains(p))
    return Eigen::MatrixXd::Identity(static_cast<long>(m), static_cast<long>(m));
  return eval(p);
}

EllipticityReport verify_ellipticity(const EllipticMatrixField& A,
                                     const ProductDomain& box, int samples,
                                     unsigned seed) {
  if (samples < 1) throw std::invalid_argument("verify_ellipticity: samples >= 1");
  std::mt19937_64 rng(seed);
  auto uni = [&](const Interval& iv) {
    std::uniform_real_distribution<double> d(iv.lo, iv.hi);
    return d(rng);
  };
  EllipticityReport rep;
  rep.min_eig = std::numeric_limits<double>::infinity();
  rep.max_eig = -std::numeric_limits<double>::infinity();
  rep.ok = true;
  const double tol = 1e-10;
  for (int s = 0; s < samples; ++s) {
    Point p = origin(A.m);
    for (std::size_t i = 0; i < A.m; ++i) {
      p.X[i] = uni(box.U_X[i]);
      p.Y[i] = uni(box.V_Y[i]);
    }
    p.t = uni(box.T);
    Eigen::MatrixXd M = A(p);
    double defect = (M - M.transpose()).cwiseAbs().maxCoeff();
    rep.symmetric_defect = std::max(rep.symmetric_defect, defect);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    rep.min_eig = std::min(rep.min_eig, lo);
    rep.max_eig = std::max(rep.max_eig, hi);
    if (lo < 1.0 / A.kappa - tol || hi > A.kappa + tol || defect > tol) {
      if (rep.ok) rep.witness = p;
      rep.ok = false;
    }
  }
  return rep;
}

namespace {

// 5-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double kGx[5] = {-0.906179845938663993, -0.538469310105683091, 0.0,
                           0.538469310105683091, 0.906179845938663993};
constexpr double kGw[5] = {0.236926885056189088, 0.478628670499366468,
                           0.568888888888888889, 0.478628670499366468,
                           0.236926885056189088};

double bump(double s) {
  double u = 1.0 - s * s;
  return (15.0 / 16.0) * u * u;  // unit mass on [-1,1]
}

}  // namespace

EllipticMatrixField mollify(const EllipticMatrixField& A, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("mollify: epsilon > 0 required");
  const std::size_t m = A.m;
  const std::size_t dims = 2 * m + 1;
  // Per axis: split the kernel support [-eps, eps] at 0 and use 5-point
  // Gauss on each half, so piecewise-smooth integrands centered at a jump
  // are integrated accurately.
  std::vector<double> q, w;
  for (int half = 0; half < 2; ++half) {
    double a = half == 0 ? -1.0 : 0.0;
    double b = half == 0 ? 0.0 : 1.0;
    for (int g = 0; g < 5; ++g) {
      double s = 0.5 * (a + b) + 0.5 * (b - a) * kGx[g];
      q.push_back(s);
      w.push_back(0.5 * (b - a) * kGw[g] * bump(s));
    }
  }
  const std::size_t nq = q.size();

  EllipticMatrixField out = A;
  out.time_dependent = true;
  out.identity_outside.reset();  // the smoothed field is evaluated directly
  EllipticMatrixField base = A;
  out.eval = [base, epsilon, m, dims, q, w, nq](const Point& p) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<long>(m),
                                                static_cast<long>(m));
    std::vector<std::size_t> idx(dims, 0);
    double wtot = 0.0;
    while (true) {
      double wt = 1.0;
      Point s = p;
      for (std::size_t d = 0; d < dims; ++d) {
        double off = epsilon * q[idx[d]];
        wt *= w[idx[d]];
        if (d < m)
          s.X[d] = p.X[d] - off;
        else if (d < 2 * m)
          s.Y[d - m] = p.Y[d - m] - off;
        else
          s.t = p.t - off;
      }
      acc += wt * base(s);
      wtot += wt;
      std::size_t d = 0;
      for (; d < dims; ++d) {
        if (++idx[d] < nq) break;
        idx[d] = 0;
      }
      if (d == dims) break;
    }
    return Eigen::MatrixXd(acc / wtot);
  };
  return out;
}

EllipticMatrixField make_coefficient_field(const std::string& family,
                                           double kappa,
                                           const std::vector<double>& params,
                                           std::size_t m) {
  if (!(kappa >= 1.0))
    throw std::invalid_argument("ellipticity constant must be >= 1");
  EllipticMatrixField F;
  F.kappa = kappa;
  F.m = m;
  const long mm = static_cast<long>(m);
  if (family == "constant") {
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(mm, mm);
    if (!params.empty()) {
      if (params.size() == m) {
        for (long i = 0; i < mm; ++i) M(i, i) = params[static_cast<std::size_t>(i)];
      } else if (params.size() == m * m) {
        for (long i = 0; i < mm; ++i)
          for (long j = 0; j < mm; ++j)
            M(i, j) = params[static_cast<std::size_t>(i * mm + j)];
      } else {
        throw std::invalid_argument("constant family: need m or m*m params");
      }
    }
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 0)
      throw std::invalid_argument("constant family: matrix must be symmetric");
    F.diagonal = M.isDiagonal(0.0);
    F.eval = [M](const Point&) { return M; };
  } else if (family == "checkerboard") {
    double a = params.size() > 0 ? params[0] : kappa;
    double b = params.size() > 1 ? params[1] : 1.0 / kappa;
    F.eval = [a, b, mm](const Point& p) {
      Eigen::MatrixXd M = Eigen::MatrixXd::Identity(mm, mm);
      bool flip = p.X[0] < 0.0;
      M(0, 0) = flip ? b : a;
      if (mm > 1) M(1, 1) = flip ? a : b;
      return M;
    };
  } else if (family == "rotated") {
    if (m != 2) throw std::invalid_argument("rotated family requires m = 2");
    double a = params.size() > 0 ? params[0] : kappa;
    double b = params.size() > 1 ? params[1] : 1.0 / kappa;
    double th = params.size() > 2 ? params[2] : 0.5;
    Eigen::Matrix2d R;
    R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    Eigen::Matrix2d M = R * Eigen::Vector2d(a, b).asDiagonal() * R.transpose();
    F.diagonal = false;
    F.eval = [M](const Point&) { return Eigen::MatrixXd(M); };
  } else if (family == "periodic") {
    double a = params.size() > 0 ? params[0] : 1.0;
    double amp = params.size() > 1 ? params[1] : 0.5;
    double freq = params.size() > 2 ? params[2] : 3.0;
    F.time_dependent = true;
    F.eval = [a, amp, freq, mm](const Point& p) {
      double phase = p.t;
      for (double v : p.X) phase += v;
      for (double v : p.Y) phase += v;
      double val = a * (1.0 + amp * std::sin(freq * phase));
      return Eigen::MatrixXd(val * Eigen::MatrixXd::Identity(mm, mm));
    };
  } else {
    throw std::invalid_argument("unknown coefficient family: " + family);
  }
  return F;
}

EllipticMatrixField identity_field(std::size_t m) {
  return make_coefficient_field("constant", 1.0, {}, m);
}

}  // namespace kfp

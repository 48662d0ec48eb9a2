#include "kfp/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "kfp/assemble.hpp"
#include "kfp/coefficients.hpp"

namespace kfp {

SliceOps::SliceOps(const Grid& g) {
  const std::size_t nx = g.nx_total();
  Point yt = origin(g.m);  // A = I is (Y,t)-independent; any slice works
  for (std::size_t a = 0; a < g.m; ++a) yt.Y[a] = g.y[a].nodes[0];
  yt.t = g.t.nodes[0];
  stiff_ = diffusion_block_weighted(g, identity_field(g.m), yt);
  vol_ = Eigen::VectorXd::Zero(static_cast<long>(nx));
  std::vector<Eigen::Triplet<double>> reg;
  for (std::size_t xi = 0; xi < nx; ++xi) {
    if (g.x_active(xi)) {
      vol_[static_cast<long>(xi)] = g.x_volume(xi);
    } else {
      reg.emplace_back(static_cast<int>(xi), static_cast<int>(xi), 1.0);
      vol_[static_cast<long>(xi)] = 0.0;
    }
  }
  if (!reg.empty()) {
    Eigen::SparseMatrix<double> R(static_cast<long>(nx), static_cast<long>(nx));
    R.setFromTriplets(reg.begin(), reg.end());
    stiff_ = stiff_ + R;  // keep cut cells out of the kernel
  }
  Eigen::SparseMatrix<double> riesz_mat = stiff_;
  for (long i = 0; i < static_cast<long>(nx); ++i)
    riesz_mat.coeffRef(i, i) += vol_[i];
  riesz_.compute(riesz_mat);
  if (riesz_.info() != Eigen::Success)
    throw std::runtime_error("SliceOps: Riesz factorization failed");
  stiff_fac_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
  stiff_fac_->compute(stiff_);
  if (stiff_fac_->info() != Eigen::Success)
    throw std::runtime_error("SliceOps: stiffness factorization failed");
}

Eigen::VectorXd SliceOps::riesz(const Eigen::VectorXd& f_slice) const {
  return riesz_.solve(vol_.cwiseProduct(f_slice));
}

double SliceOps::dual_norm(const Eigen::VectorXd& f_slice) const {
  Eigen::VectorXd w = riesz(f_slice);
  const double v = f_slice.dot(vol_.cwiseProduct(w));
  return v > 0 ? std::sqrt(v) : 0.0;
}

double SliceOps::min_eigenvalue(int max_iter, double tol) const {
  const long n = vol_.size();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  for (long i = 0; i < n; ++i)
    if (vol_[i] == 0.0) v[i] = 0.0;
  double lambda = 0.0, prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = stiff_fac_->solve(vol_.cwiseProduct(v));
    for (long i = 0; i < n; ++i)
      if (vol_[i] == 0.0) w[i] = 0.0;
    const double nrm = w.norm();
    if (nrm == 0.0) throw std::runtime_error("min_eigenvalue: breakdown");
    v = w / nrm;
    const double num = v.dot(Eigen::VectorXd(stiff_ * v));
    const double den = v.dot(vol_.cwiseProduct(v));
    lambda = num / den;
    if (prev > 0 && std::fabs(lambda - prev) < tol * lambda) break;
    prev = lambda;
  }
  return lambda;
}

namespace {

// Slice view: contiguous nx-block at a (Y,t) node.
inline Eigen::Map<const Eigen::VectorXd> slice_of(const Grid& g,
                                                  const DiscreteField& u,
                                                  std::size_t yi,
                                                  std::size_t ti) {
  const std::size_t nx = g.nx_total();
  return Eigen::Map<const Eigen::VectorXd>(
      u.values.data() + g.node(0, yi, ti), static_cast<long>(nx));
}

struct SliceSeminorms {
  double l2sq = 0.0;
  double gradsq = 0.0;
};

SliceSeminorms slice_seminorms(const Grid& g, const double* v) {
  SliceSeminorms s;
  const std::size_t nx = g.nx_total();
  std::vector<std::size_t> ix;
  std::vector<std::pair<std::size_t, double>> st;
  for (std::size_t xi = 0; xi < nx; ++xi) {
    if (!g.x_active(xi)) continue;
    const double vol = g.x_volume(xi);
    s.l2sq += vol * v[xi] * v[xi];
    g.x_unindex(xi, ix);
    for (std::size_t a = 0; a < g.m; ++a) {
      x_gradient_stencil(g, a, ix, st);
      double d = 0.0;
      for (const auto& [n, c] : st) d += c * v[n];
      s.gradsq += vol * d * d;
    }
  }
  return s;
}

}  // namespace

double h1x_norm(const Grid& g, const DiscreteField& u) {
  const std::size_t ny = g.ny_total(), nt = g.t.n();
  double acc = 0.0;
  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t yi = 0; yi < ny; ++yi) {
      const double* v = u.values.data() + g.node(0, yi, ti);
      SliceSeminorms s = slice_seminorms(g, v);
      const double val = std::sqrt(s.l2sq) + std::sqrt(s.gradsq);
      acc += g.yt_weight(yi, ti) * val * val;
    }
  }
  return std::sqrt(acc);
}

double h1x_dual_norm(const Grid& g, const Eigen::VectorXd& f_slice) {
  SliceOps ops(g);
  return ops.dual_norm(f_slice);
}

DiscreteField transport_apply(const Grid& g, const DiscreteField& u) {
  DiscreteField out(g);
  const std::size_t nx = g.nx_total(), ny = g.ny_total(), nt = g.t.n();
  std::vector<std::size_t> iy, jy;
  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t yi = 0; yi < ny; ++yi) {
      g.y_unindex(yi, iy);
      for (std::size_t xi = 0; xi < nx; ++xi) {
        const std::size_t idx = g.node(xi, yi, ti);
        if (g.cls[idx] == NodeClass::Inactive) continue;
        const Point p = g.point(xi, yi, ti);
        double val = 0.0;
        // d_t backward; forward on the initial layer.
        if (ti > 0) {
          const double dt = g.t.nodes[ti] - g.t.nodes[ti - 1];
          val += (u[idx] - u[g.node(xi, yi, ti - 1)]) / dt;
        } else {
          const double dt = g.t.nodes[1] - g.t.nodes[0];
          val += (u[g.node(xi, yi, 1)] - u[idx]) / dt;
        }
        // -x_b d_{y_b} u with the assembly's upwind side where available.
        for (std::size_t b = 0; b < g.m; ++b) {
          const double xb = p.X[b];
          if (xb == 0.0) continue;
          const std::size_t j = iy[b];
          const auto& ay = g.y[b];
          jy = iy;
          bool forward = xb > 0.0;
          if (forward && j + 1 >= ay.n()) forward = false;
          if (!forward && j == 0) forward = true;
          if (forward) {
            jy[b] = j + 1;
            const double dy = ay.nodes[j + 1] - ay.nodes[j];
            val -= xb * (u[g.node(xi, g.y_index(jy), ti)] - u[idx]) / dy;
          } else {
            jy[b] = j - 1;
            const double dy = ay.nodes[j] - ay.nodes[j - 1];
            val -= xb * (u[idx] - u[g.node(xi, g.y_index(jy), ti)]) / dy;
          }
        }
        out[idx] = val;
      }
    }
  }
  return out;
}

namespace {

double aggregate_dual(const Grid& g, const SliceOps& ops, const DiscreteField& f) {
  const std::size_t ny = g.ny_total(), nt = g.t.n();
  double acc = 0.0;
  for (std::size_t ti = 0; ti < nt; ++ti)
    for (std::size_t yi = 0; yi < ny; ++yi) {
      const double d = ops.dual_norm(slice_of(g, f, yi, ti));
      acc += g.yt_weight(yi, ti) * d * d;
    }
  return std::sqrt(acc);
}

}  // namespace

NormReport w_norm(const Grid& g, const DiscreteField& u) {
  NormReport r;
  SliceOps ops(g);
  const std::size_t ny = g.ny_total(), nt = g.t.n();
  double l2 = 0.0;
  for (std::size_t ti = 0; ti < nt; ++ti)
    for (std::size_t yi = 0; yi < ny; ++yi) {
      SliceSeminorms s = slice_seminorms(g, u.values.data() + g.node(0, yi, ti));
      l2 += g.yt_weight(yi, ti) * s.l2sq;
    }
  r.l2 = std::sqrt(l2);
  r.h1x = h1x_norm(g, u);
  r.h1x_dual = aggregate_dual(g, ops, u);
  DiscreteField tu = transport_apply(g, u);
  r.transport_dual = aggregate_dual(g, ops, tu);
  r.w_norm = r.h1x + r.transport_dual;
  return r;
}

double transport_free_dual_norm(const Grid& g, const DiscreteField& f) {
  SliceOps ops(g);
  return aggregate_dual(g, ops, f);
}

double poincare_constant_x(const Grid& g) {
  SliceOps ops(g);
  const double lambda = ops.min_eigenvalue();
  return 1.0 / std::sqrt(lambda);
}

double kinetic_poincare_ratio(const Grid& g, const DiscreteField& f) {
  SliceOps ops(g);
  const std::size_t ny = g.ny_total(), nt = g.t.n();
  double l2 = 0.0, grad = 0.0;
  for (std::size_t ti = 0; ti < nt; ++ti)
    for (std::size_t yi = 0; yi < ny; ++yi) {
      SliceSeminorms s = slice_seminorms(g, f.values.data() + g.node(0, yi, ti));
      const double w = g.yt_weight(yi, ti);
      l2 += w * s.l2sq;
      grad += w * s.gradsq;
    }
  DiscreteField tf = transport_apply(g, f);
  const double td = aggregate_dual(g, ops, tf);
  const double denom = std::sqrt(grad) + td;
  return denom > 0 ? std::sqrt(l2) / denom : 0.0;
}

KineticPoincareReport kinetic_poincare_check(const Grid& g, int trials,
                                             unsigned seed) {
  if (trials < 1) throw std::invalid_argument("kinetic_poincare_check: trials >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  KineticPoincareReport rep;
  for (int tr = 0; tr < trials; ++tr) {
    DiscreteField f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.cls[i] == NodeClass::Inactive || g.cls[i] == NodeClass::Kolmogorov)
        continue;  // vanish on the Kolmogorov (Y,t) boundary
      f[i] = nd(rng);
    }
    rep.ratios.push_back(kinetic_poincare_ratio(g, f));
  }
  std::vector<double> sorted = rep.ratios;
  std::sort(sorted.begin(), sorted.end());
  rep.max_ratio = sorted.back();
  rep.median_ratio = sorted[sorted.size() / 2];
  return rep;
}

}  // namespace kfp

#include "kfp/variational.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "kfp/spaces.hpp"

namespace kfp {

namespace {

using Triplet = Eigen::Triplet<double>;

void require_diagonal(const EllipticMatrixField& A) {
  if (!A.diagonal)
    throw std::invalid_argument(
        "variational path supports diagonal coefficient fields only");
}

// Face diffusion coefficient matching the direct scheme: arithmetic mean
// of the two cell values across interior faces, point value at walls.
double face_coefficient(const Grid& g, const FaceGeom& fg,
                        const EllipticMatrixField& A, std::size_t yi,
                        std::size_t ti) {
  const long a = static_cast<long>(fg.axis);
  if (fg.type == FaceGeom::Interior) {
    const Point plo = g.point(fg.lo, yi, ti);
    const Point phi = g.point(fg.hi, yi, ti);
    return 0.5 * (A(plo)(a, a) + A(phi)(a, a));
  }
  Point q = g.point(fg.type == FaceGeom::WallLo ? fg.hi : fg.lo, yi, ti);
  q.X[fg.axis] = fg.coord;
  return A(q)(a, a);
}

Point wall_point(const Grid& g, const FaceGeom& fg, std::size_t yi,
                 std::size_t ti) {
  Point q = g.point(fg.type == FaceGeom::WallLo ? fg.hi : fg.lo, yi, ti);
  q.X[fg.axis] = fg.coord;
  return q;
}

// Quadratic form of the functional over the stacked unknown [f; j]:
// J(z) = 1/2 z^T H z + c^T z + j0.
struct QuadraticForm {
  Eigen::SparseMatrix<double> H;
  Eigen::VectorXd c;
  double j0 = 0.0;
};

QuadraticForm build_form(const FaceLayout& fl, const EllipticMatrixField& A,
                         const PointFn& gbc) {
  const Grid& g = fl.grid();
  const std::size_t nf = g.size(), nj = fl.total();
  const long dim = static_cast<long>(nf + nj);
  std::vector<Triplet> trips;
  QuadraticForm q;
  q.c = Eigen::VectorXd::Zero(dim);
  const std::size_t ny = g.ny_total(), nt = g.t.n();
  std::vector<std::pair<long, double>> L;
  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t yi = 0; yi < ny; ++yi) {
      const double wyt = g.yt_weight(yi, ti);
      for (std::size_t k = 0; k < fl.per_slice(); ++k) {
        const FaceGeom& fg = fl.faces()[k];
        const double W = wyt * fg.omega * face_coefficient(g, fg, A, yi, ti);
        const long jcol = static_cast<long>(nf + fl.global_index(k, yi, ti));
        double cst = 0.0;
        L.clear();
        L.emplace_back(jcol, -1.0);
        if (fg.type == FaceGeom::Interior) {
          L.emplace_back(static_cast<long>(g.node(fg.hi, yi, ti)), 1.0 / fg.d);
          L.emplace_back(static_cast<long>(g.node(fg.lo, yi, ti)), -1.0 / fg.d);
        } else if (fg.type == FaceGeom::WallLo) {
          L.emplace_back(static_cast<long>(g.node(fg.hi, yi, ti)), 1.0 / fg.d);
          cst = -gbc(wall_point(g, fg, yi, ti)) / fg.d;
        } else {
          L.emplace_back(static_cast<long>(g.node(fg.lo, yi, ti)), -1.0 / fg.d);
          cst = gbc(wall_point(g, fg, yi, ti)) / fg.d;
        }
        for (const auto& [r, cr] : L) {
          q.c[r] += W * cst * cr;
          for (const auto& [s, cs] : L)
            trips.emplace_back(static_cast<int>(r), static_cast<int>(s),
                               W * cr * cs);
        }
        q.j0 += 0.5 * W * cst * cst;
      }
    }
  }
  q.H.resize(dim, dim);
  q.H.setFromTriplets(trips.begin(), trips.end());
  return q;
}

}  // namespace

FaceLayout::FaceLayout(const Grid& g) : grid_(&g) {
  const std::size_t m = g.m;
  axis_map_.resize(m);
  std::vector<std::size_t> ix(m), cix(m);
  for (std::size_t a = 0; a < m; ++a) {
    std::size_t dense = 1;
    for (std::size_t b = 0; b < m; ++b)
      dense *= (b == a) ? g.x[b].n() + 1 : g.x[b].n();
    axis_map_[a].assign(dense, npos);
    std::fill(ix.begin(), ix.end(), 0);
    for (std::size_t dp = 0; dp < dense; ++dp) {
      const std::size_t k = ix[a];
      const auto& axx = g.x[a];
      bool lo_ok = k > 0, hi_ok = k < axx.n();
      std::size_t lo = 0, hi = 0;
      if (lo_ok) {
        cix = ix;
        cix[a] = k - 1;
        lo = g.x_index(cix);
        lo_ok = g.x_active(lo);
      }
      if (hi_ok) {
        cix = ix;
        hi = g.x_index(cix);
        hi_ok = g.x_active(hi);
      }
      if (lo_ok || hi_ok) {
        FaceGeom fg;
        fg.axis = a;
        fg.coord = axx.faces[k];
        double trans = 1.0;
        for (std::size_t b = 0; b < m; ++b)
          if (b != a) trans *= g.x[b].widths[ix[b]];
        if (lo_ok && hi_ok) {
          fg.type = FaceGeom::Interior;
          fg.lo = lo;
          fg.hi = hi;
          fg.d = axx.centers[k] - axx.centers[k - 1];
          fg.omega = trans * 0.5 * (axx.widths[k - 1] + axx.widths[k]);
        } else if (hi_ok) {
          fg.type = FaceGeom::WallLo;
          fg.hi = hi;
          fg.d = axx.centers[k] - fg.coord;
          fg.omega = trans * 0.5 * axx.widths[k];
        } else {
          fg.type = FaceGeom::WallHi;
          fg.lo = lo;
          fg.d = fg.coord - axx.centers[k - 1];
          fg.omega = trans * 0.5 * axx.widths[k - 1];
        }
        axis_map_[a][dp] = faces_.size();
        faces_.push_back(fg);
      }
      // Odometer over (face position in axis a, cells elsewhere), X fastest.
      for (std::size_t b = 0; b < m; ++b) {
        const std::size_t lim = (b == a) ? g.x[b].n() + 1 : g.x[b].n();
        if (++ix[b] < lim) break;
        ix[b] = 0;
      }
    }
  }
}

std::size_t FaceLayout::slice_face(std::size_t axis,
                                   const std::vector<std::size_t>& ix,
                                   bool hi_side) const {
  std::size_t dp = 0, stride = 1;
  for (std::size_t b = 0; b < grid_->m; ++b) {
    const std::size_t pos =
        (b == axis) ? ix[b] + (hi_side ? 1 : 0) : ix[b];
    dp += pos * stride;
    stride *= (b == axis) ? grid_->x[b].n() + 1 : grid_->x[b].n();
  }
  return axis_map_[axis][dp];
}

FaceField gradient_faces(const FaceLayout& fl, const DiscreteField& f,
                         const PointFn& gbc) {
  const Grid& g = fl.grid();
  FaceField out(fl);
  const std::size_t ny = g.ny_total(), nt = g.t.n();
  for (std::size_t ti = 0; ti < nt; ++ti)
    for (std::size_t yi = 0; yi < ny; ++yi)
      for (std::size_t k = 0; k < fl.per_slice(); ++k) {
        const FaceGeom& fg = fl.faces()[k];
        double d;
        if (fg.type == FaceGeom::Interior)
          d = (f[g.node(fg.hi, yi, ti)] - f[g.node(fg.lo, yi, ti)]) / fg.d;
        else if (fg.type == FaceGeom::WallLo)
          d = (f[g.node(fg.hi, yi, ti)] - gbc(wall_point(g, fg, yi, ti))) /
              fg.d;
        else
          d = (gbc(wall_point(g, fg, yi, ti)) - f[g.node(fg.lo, yi, ti)]) /
              fg.d;
        out.values[static_cast<long>(fl.global_index(k, yi, ti))] = d;
      }
  return out;
}

double functional_value(const FaceLayout& fl, const EllipticMatrixField& A,
                        const PointFn& gbc, const DiscreteField& f,
                        const FaceField& j) {
  require_diagonal(A);
  const Grid& g = fl.grid();
  FaceField df = gradient_faces(fl, f, gbc);
  double acc = 0.0;
  const std::size_t ny = g.ny_total(), nt = g.t.n();
  for (std::size_t ti = 0; ti < nt; ++ti)
    for (std::size_t yi = 0; yi < ny; ++yi) {
      const double wyt = g.yt_weight(yi, ti);
      for (std::size_t k = 0; k < fl.per_slice(); ++k) {
        const FaceGeom& fg = fl.faces()[k];
        const long gi = static_cast<long>(fl.global_index(k, yi, ti));
        const double r = df.values[gi] - j.values[gi];
        acc += 0.5 * wyt * fg.omega * face_coefficient(g, fg, A, yi, ti) * r * r;
      }
    }
  return acc;
}

ConstraintSystem build_constraints(const Grid& g, const FaceLayout& fl,
                                   const ProblemData& prob) {
  require_diagonal(prob.A);
  const std::size_t nf = g.size(), nj = fl.total();
  ConstraintSystem cs;
  cs.f_count = nf;
  cs.j_count = nj;
  cs.rhs = Eigen::VectorXd::Zero(static_cast<long>(nf));
  std::vector<Triplet> trips;
  const std::size_t nx = g.nx_total(), ny = g.ny_total(), nt = g.t.n();
  std::vector<std::size_t> ix;
  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t yi = 0; yi < ny; ++yi) {
      for (std::size_t xi = 0; xi < nx; ++xi) {
        const std::size_t idx = g.node(xi, yi, ti);
        const int row = static_cast<int>(idx);
        const NodeClass c = g.cls[idx];
        if (c == NodeClass::Inactive) {
          trips.emplace_back(row, row, 1.0);
          continue;
        }
        if (c == NodeClass::Kolmogorov) {
          trips.emplace_back(row, row, 1.0);
          cs.rhs[row] = prob.g(g.point(idx));
          continue;
        }
        transport_time_row(g, xi, yi, ti, [&](std::size_t col, double v) {
          trips.emplace_back(row, static_cast<int>(col), v);
        });
        cs.rhs[row] = -prob.gstar(g.point(idx));
        // Diffusion with the flux unknown: -(A_hi j_hi - A_lo j_lo)/w.
        g.x_unindex(xi, ix);
        for (std::size_t a = 0; a < g.m; ++a) {
          const double w = g.x[a].widths[ix[a]];
          for (int side = 0; side < 2; ++side) {
            const bool hi = side == 1;
            const std::size_t k = fl.slice_face(a, ix, hi);
            if (k == FaceLayout::npos)
              throw std::logic_error("build_constraints: missing face");
            const double Af =
                face_coefficient(g, fl.faces()[k], prob.A, yi, ti);
            trips.emplace_back(
                row, static_cast<int>(nf + fl.global_index(k, yi, ti)),
                (hi ? -1.0 : 1.0) * Af / w);
          }
        }
      }
    }
  }
  cs.matrix.resize(static_cast<long>(nf), static_cast<long>(nf + nj));
  cs.matrix.setFromTriplets(trips.begin(), trips.end());
  return cs;
}

MinimizerPair minimize_joint(const Grid& g, const ProblemData& prob) {
  require_diagonal(prob.A);
  FaceLayout fl(g);
  const std::size_t nf = g.size(), nj = fl.total();
  const long nz = static_cast<long>(nf + nj);
  QuadraticForm q = build_form(fl, prob.A, prob.g);
  ConstraintSystem cs = build_constraints(g, fl, prob);
  const long nc = static_cast<long>(nf);

  std::vector<Triplet> trips;
  for (int kk = 0; kk < q.H.outerSize(); ++kk)
    for (Eigen::SparseMatrix<double>::InnerIterator it(q.H, kk); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                         it.value());
  for (int kk = 0; kk < cs.matrix.outerSize(); ++kk)
    for (Eigen::SparseMatrix<double>::InnerIterator it(cs.matrix, kk); it;
         ++it) {
      trips.emplace_back(static_cast<int>(nz + it.row()),
                         static_cast<int>(it.col()), it.value());
      trips.emplace_back(static_cast<int>(it.col()),
                         static_cast<int>(nz + it.row()), it.value());
    }
  Eigen::SparseMatrix<double> K(nz + nc, nz + nc);
  K.setFromTriplets(trips.begin(), trips.end());
  Eigen::VectorXd rhs(nz + nc);
  rhs.head(nz) = -q.c;
  rhs.tail(nc) = cs.rhs;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(K);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("minimize_joint: KKT factorization failed");
  Eigen::VectorXd sol = lu.solve(rhs);
  const double rn = rhs.norm();

  MinimizerPair out{DiscreteField(g), FaceField(fl), 0.0, 0.0, 0.0};
  out.kkt_residual = (K * sol - rhs).norm() / (rn > 0 ? rn : 1.0);
  out.f.values = sol.head(static_cast<long>(nf));
  out.j.values = sol.segment(static_cast<long>(nf), static_cast<long>(nj));
  out.objective = functional_value(fl, prob.A, prob.g, out.f, out.j);
  Eigen::VectorXd cres = cs.matrix * sol.head(nz) - cs.rhs;
  out.constraint_residual = cres.lpNorm<Eigen::Infinity>();
  return out;
}

JReport evaluate_J(const Grid& g, const ProblemData& prob,
                   const DiscreteField& f) {
  require_diagonal(prob.A);
  FaceLayout fl(g);
  const std::size_t nj = fl.total();
  const std::size_t ny = g.ny_total(), nt = g.t.n(), nx = g.nx_total();

  // Diagonal weights and the gradient target d = Df (wall-closed with g).
  Eigen::VectorXd W(static_cast<long>(nj));
  for (std::size_t ti = 0; ti < nt; ++ti)
    for (std::size_t yi = 0; yi < ny; ++yi)
      for (std::size_t k = 0; k < fl.per_slice(); ++k) {
        const FaceGeom& fg = fl.faces()[k];
        W[static_cast<long>(fl.global_index(k, yi, ti))] =
            g.yt_weight(yi, ti) * fg.omega *
            face_coefficient(g, fg, prob.A, yi, ti);
      }
  FaceField d = gradient_faces(fl, f, prob.g);

  // Constraint rows at non-Kolmogorov nodes, with the given f moved to the
  // right-hand side.
  std::vector<Triplet> trips;
  std::vector<double> rhs_rows;
  std::vector<std::size_t> ix;
  int row = 0;
  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t yi = 0; yi < ny; ++yi) {
      for (std::size_t xi = 0; xi < nx; ++xi) {
        const std::size_t idx = g.node(xi, yi, ti);
        if (g.cls[idx] != NodeClass::Interior && g.cls[idx] != NodeClass::Free)
          continue;
        double b = -prob.gstar(g.point(idx));
        transport_time_row(g, xi, yi, ti,
                           [&](std::size_t col, double v) { b -= v * f[col]; });
        g.x_unindex(xi, ix);
        for (std::size_t a = 0; a < g.m; ++a) {
          const double w = g.x[a].widths[ix[a]];
          for (int side = 0; side < 2; ++side) {
            const bool hi = side == 1;
            const std::size_t k = fl.slice_face(a, ix, hi);
            const double Af =
                face_coefficient(g, fl.faces()[k], prob.A, yi, ti);
            trips.emplace_back(row,
                               static_cast<int>(fl.global_index(k, yi, ti)),
                               (hi ? -1.0 : 1.0) * Af / w);
          }
        }
        rhs_rows.push_back(b);
        ++row;
      }
    }
  }
  const long nc = row;
  Eigen::SparseMatrix<double> C(nc, static_cast<long>(nj));
  C.setFromTriplets(trips.begin(), trips.end());

  // KKT of min 1/2 (j-d)^T W (j-d) s.t. C j = b.
  std::vector<Triplet> kt;
  for (long i = 0; i < static_cast<long>(nj); ++i)
    kt.emplace_back(static_cast<int>(i), static_cast<int>(i), W[i]);
  for (int kk = 0; kk < C.outerSize(); ++kk)
    for (Eigen::SparseMatrix<double>::InnerIterator it(C, kk); it; ++it) {
      kt.emplace_back(static_cast<int>(nj + it.row()),
                      static_cast<int>(it.col()), it.value());
      kt.emplace_back(static_cast<int>(it.col()),
                      static_cast<int>(nj + it.row()), it.value());
    }
  Eigen::SparseMatrix<double> K(static_cast<long>(nj) + nc,
                                static_cast<long>(nj) + nc);
  K.setFromTriplets(kt.begin(), kt.end());
  Eigen::VectorXd rhs(static_cast<long>(nj) + nc);
  rhs.head(static_cast<long>(nj)) = W.cwiseProduct(d.values);
  for (long i = 0; i < nc; ++i)
    rhs[static_cast<long>(nj) + i] = rhs_rows[static_cast<std::size_t>(i)];

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(K);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("evaluate_J: KKT factorization failed");
  Eigen::VectorXd sol = lu.solve(rhs);
  Eigen::VectorXd j = sol.head(static_cast<long>(nj));

  JReport rep;
  Eigen::VectorXd r = d.values - j;
  rep.value = 0.5 * r.dot(W.cwiseProduct(r));
  Eigen::VectorXd cres = C * j;
  for (long i = 0; i < nc; ++i)
    cres[i] -= rhs_rows[static_cast<std::size_t>(i)];
  rep.constraint_residual = nc > 0 ? cres.lpNorm<Eigen::Infinity>() : 0.0;
  return rep;
}

ConvexityReport convexity_certificate(const Grid& g,
                                      const EllipticMatrixField& A, int trials,
                                      unsigned seed) {
  require_diagonal(A);
  if (trials < 1)
    throw std::invalid_argument("convexity_certificate: trials >= 1");
  FaceLayout fl(g);
  const std::size_t nf = g.size(), nj = fl.total();
  const long nz = static_cast<long>(nf + nj);

  PointFn zero = [](const Point&) { return 0.0; };
  ProblemData hom;
  hom.A = A;
  hom.g = zero;
  hom.gstar = zero;
  ConstraintSystem cs = build_constraints(g, fl, hom);
  QuadraticForm q = build_form(fl, A, zero);

  Eigen::SparseMatrix<double> CCt = cs.matrix * Eigen::SparseMatrix<double>(
                                                    cs.matrix.transpose());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(CCt);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("convexity_certificate: projection failed");

  // j mass weights (no coefficient) for the denominator.
  Eigen::VectorXd jw(static_cast<long>(nj));
  for (std::size_t ti = 0; ti < g.t.n(); ++ti)
    for (std::size_t yi = 0; yi < g.ny_total(); ++yi)
      for (std::size_t k = 0; k < fl.per_slice(); ++k)
        jw[static_cast<long>(fl.global_index(k, yi, ti))] =
            g.yt_weight(yi, ti) * fl.faces()[k].omega;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  ConvexityReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (int tr = 0; tr < trials; ++tr) {
    Eigen::VectorXd z(nz);
    for (long i = 0; i < nz; ++i) z[i] = nd(rng);
    for (int pass = 0; pass < 2; ++pass)
      z -= cs.matrix.transpose() *
           Eigen::VectorXd(ldlt.solve(cs.matrix * z));
    DiscreteField f(g);
    f.values = z.head(static_cast<long>(nf));
    Eigen::VectorXd j = z.tail(static_cast<long>(nj));
    const double num = 0.5 * z.dot(Eigen::VectorXd(q.H * z));
    NormReport nr = w_norm(g, f);
    const double den = nr.w_norm * nr.w_norm + j.dot(jw.cwiseProduct(j));
    const double ratio = den > 0 ? num / den : 0.0;
    rep.ratios.push_back(ratio);
    rep.min_ratio = std::min(rep.min_ratio, ratio);
  }
  return rep;
}

double energy_estimate_ratio(const Grid& g, const ProblemData& prob,
                             const DiscreteField& u) {
  DiscreteField gf = sample_field(g, prob.g);
  DiscreteField diff(g);
  diff.values = u.values - gf.values;
  const double num = h1x_norm(g, diff);
  NormReport ng = w_norm(g, gf);
  DiscreteField gs = sample_field(g, prob.gstar);
  const double den = ng.w_norm + transport_free_dual_norm(g, gs);
  return den > 0 ? num / den : 0.0;
}

SignIdentityReport apa_plus_identity(const Grid& g, const DiscreteField& f) {
  SignIdentityReport rep;
  const std::size_t nx = g.nx_total(), ny = g.ny_total(), nt = g.t.n();
  std::vector<std::size_t> iy;

  // Transport terms, one y-axis at a time, telescoping along the axis.
  for (std::size_t b = 0; b < g.m; ++b) {
    const std::size_t nb = g.y[b].n();
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const double wt = g.t.weights[ti];
      for (std::size_t yi = 0; yi < ny; ++yi) {
        g.y_unindex(yi, iy);
        if (iy[b] != 0) continue;  // line start
        double wtrans = wt;
        for (std::size_t bb = 0; bb < g.m; ++bb)
          if (bb != b) wtrans *= g.y[bb].weights[iy[bb]];
        std::vector<std::size_t> ix;
        for (std::size_t xi = 0; xi < nx; ++xi) {
          if (!g.x_active(xi)) continue;
          g.x_unindex(xi, ix);
          const double xb = g.x[b].centers[ix[b]];
          if (xb == 0.0) continue;
          const double wq = wtrans * g.x_volume(xi);
          double diss2 = 0.0, vol = 0.0;
          std::vector<std::size_t> jy = iy;
          if (xb > 0.0) {
            for (std::size_t j = 0; j + 1 < nb; ++j) {
              jy[b] = j;
              const double fj = f[g.node(xi, g.y_index(jy), ti)];
              jy[b] = j + 1;
              const double fj1 = f[g.node(xi, g.y_index(jy), ti)];
              vol += fj * (fj1 - fj);
              diss2 += (fj1 - fj) * (fj1 - fj);
            }
            jy[b] = 0;
            const double f0 = f[g.node(xi, g.y_index(jy), ti)];
            rep.boundary += wq * (-0.5 * xb * f0 * f0);
            rep.dissipation += wq * 0.5 * xb * diss2;
          } else {
            for (std::size_t j = 1; j < nb; ++j) {
              jy[b] = j;
              const double fj = f[g.node(xi, g.y_index(jy), ti)];
              jy[b] = j - 1;
              const double fm = f[g.node(xi, g.y_index(jy), ti)];
              vol += fj * (fj - fm);
              diss2 += (fj - fm) * (fj - fm);
            }
            jy[b] = nb - 1;
            const double fn = f[g.node(xi, g.y_index(jy), ti)];
            rep.boundary += wq * (0.5 * xb * fn * fn);
            rep.dissipation += wq * (-0.5 * xb) * diss2;
          }
          rep.volume += wq * xb * vol;
        }
      }
    }
  }

  // Time term -d_t f . f, backward differences along t.
  for (std::size_t yi = 0; yi < ny; ++yi) {
    g.y_unindex(yi, iy);
    double wy = 1.0;
    for (std::size_t bb = 0; bb < g.m; ++bb) wy *= g.y[bb].weights[iy[bb]];
    for (std::size_t xi = 0; xi < nx; ++xi) {
      if (!g.x_active(xi)) continue;
      const double wq = wy * g.x_volume(xi);
      double vol = 0.0, diss2 = 0.0;
      for (std::size_t n = 1; n < nt; ++n) {
        const double fn = f[g.node(xi, yi, n)];
        const double fm = f[g.node(xi, yi, n - 1)];
        vol += -fn * (fn - fm);
        diss2 += (fn - fm) * (fn - fm);
      }
      const double fT = f[g.node(xi, yi, nt - 1)];
      rep.volume += wq * vol;
      rep.boundary += wq * (-0.5 * fT * fT);
      rep.dissipation += wq * 0.5 * diss2;
    }
  }
  return rep;
}

}  // namespace kfp

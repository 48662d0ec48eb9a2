#include "kfp/assemble.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseLU>

#include "kfp/spaces.hpp"

namespace kfp {

namespace {

using Triplet = Eigen::Triplet<double>;
using EmitFn = std::function<void(std::size_t, double)>;

// Dirichlet face coordinate for the wall below/above cell k in axis a.
// For cut cells the shared face with the inactive neighbor is used.
double wall_coordinate(const CellAxis& ax, std::size_t k, bool lo_side) {
  return lo_side ? ax.faces[k] : ax.faces[k + 1];
}

struct RowWorkspace {
  std::vector<std::size_t> ix, iy, nix;
  std::vector<std::pair<std::size_t, double>> grad_a, grad_b;
};

// Emits the row of -L_h u = -g* at an active non-Kolmogorov node.
// emit(node, coeff) accumulates matrix entries; rhs collects -g* plus
// Dirichlet contributions from dU_X faces.
void emit_row(const Grid& g, const ProblemData& prob, std::size_t xi,
              std::size_t yi, std::size_t ti, const EmitFn& emit, double& rhs,
              RowWorkspace& ws) {
  const std::size_t m = g.m;
  g.x_unindex(xi, ws.ix);
  g.y_unindex(yi, ws.iy);
  const Point p = g.point(xi, yi, ti);
  rhs -= prob.gstar(p);

  const std::size_t self = g.node(xi, yi, ti);

  // Time derivative, backward implicit: (u^n - u^{n-1}) / dt.
  {
    const double dt = g.t.nodes[ti] - g.t.nodes[ti - 1];
    emit(self, 1.0 / dt);
    emit(g.node(xi, yi, ti - 1), -1.0 / dt);
  }

  // Transport -x_b d_{y_b} u, upwinded toward the inflow face.
  for (std::size_t b = 0; b < m; ++b) {
    const double xb = p.X[b];
    if (xb == 0.0) continue;
    const auto& ay = g.y[b];
    const std::size_t j = ws.iy[b];
    std::vector<std::size_t> jy = ws.iy;
    if (xb > 0.0) {
      if (j + 1 >= ay.n())
        throw std::logic_error("upwind stencil fell off the +y face");
      jy[b] = j + 1;
      const double dy = ay.nodes[j + 1] - ay.nodes[j];
      emit(g.node(xi, g.y_index(jy), ti), -xb / dy);
      emit(self, xb / dy);
    } else {
      if (j == 0) throw std::logic_error("upwind stencil fell off the -y face");
      jy[b] = j - 1;
      const double dy = ay.nodes[j] - ay.nodes[j - 1];
      emit(self, -xb / dy);
      emit(g.node(xi, g.y_index(jy), ti), xb / dy);
    }
  }

  if (prob.no_diffusion) return;

  const double vol = g.x_volume(xi);
  Eigen::MatrixXd Ap = prob.A(p);

  // Diagonal diffusion: conservative two-point fluxes per x-axis.
  for (std::size_t a = 0; a < m; ++a) {
    const auto& ax = g.x[a];
    const std::size_t k = ws.ix[a];
    const double w = ax.widths[k];
    for (int side = 0; side < 2; ++side) {
      const bool lo = side == 0;
      ws.nix = ws.ix;
      bool neighbor = lo ? k > 0 : k + 1 < ax.n();
      std::size_t nxi = 0;
      if (neighbor) {
        ws.nix[a] = lo ? k - 1 : k + 1;
        nxi = g.x_index(ws.nix);
        neighbor = g.x_active(nxi);
      }
      if (neighbor) {
        Point q = p;
        q.X[a] = ax.centers[ws.nix[a]];
        const double Aface = 0.5 * (Ap(static_cast<long>(a), static_cast<long>(a)) +
                                    prob.A(q)(static_cast<long>(a), static_cast<long>(a)));
        const double d = std::fabs(ax.centers[ws.nix[a]] - ax.centers[k]);
        const double c = Aface / (d * w);
        emit(self, c);
        emit(g.node(nxi, yi, ti), -c);
      } else {
        // Dirichlet wall: one-sided flux against the boundary value.
        Point q = p;
        q.X[a] = wall_coordinate(ax, k, lo);
        const double Aface = prob.A(q)(static_cast<long>(a), static_cast<long>(a));
        const double d = std::fabs(ax.centers[k] - q.X[a]);
        const double c = Aface / (d * w);
        emit(self, c);
        rhs += c * prob.g(q);
      }
    }
  }

  // Cross terms for full-tensor A: weak-form with cell-centered gradients,
  // (1/vol_p) sum_{a != b} [Q_a^T diag(vol A_ab) Q_b u]_p.
  if (!prob.A.diagonal && m > 1) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        if (a == b) continue;
        for (int off = -1; off <= 1; ++off) {
          ws.nix = ws.ix;
          const long kk = static_cast<long>(ws.ix[a]) + off;
          if (kk < 0 || kk >= static_cast<long>(g.x[a].n())) continue;
          ws.nix[a] = static_cast<std::size_t>(kk);
          const std::size_t cxi = g.x_index(ws.nix);
          if (!g.x_active(cxi)) continue;
          x_gradient_stencil(g, a, ws.nix, ws.grad_a);
          double q_ap = 0.0;
          for (const auto& [n, c] : ws.grad_a)
            if (n == xi) q_ap = c;
          if (q_ap == 0.0) continue;
          Point pc = g.point(cxi, yi, ti);
          const double Aab = prob.A(pc)(static_cast<long>(a), static_cast<long>(b));
          if (Aab == 0.0) continue;
          const double wc = q_ap * g.x_volume(cxi) * Aab / vol;
          x_gradient_stencil(g, b, ws.nix, ws.grad_b);
          for (const auto& [n, c] : ws.grad_b) emit(g.node(n, yi, ti), wc * c);
        }
      }
    }
  }
}

bool uniform_dt(const Grid& g) {
  const auto& tn = g.t.nodes;
  const double dt0 = tn[1] - tn[0];
  for (std::size_t i = 2; i < tn.size(); ++i)
    if (std::fabs((tn[i] - tn[i - 1]) - dt0) > 1e-12 * std::fabs(dt0)) return false;
  return true;
}

}  // namespace

SparseOperator assemble_monolithic(const Grid& g, const ProblemData& prob) {
  const std::size_t n = g.size();
  std::vector<Triplet> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<long>(n));
  RowWorkspace ws;
  const std::size_t nx = g.nx_total(), ny = g.ny_total(), nt = g.t.n();
  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t yi = 0; yi < ny; ++yi) {
      for (std::size_t xi = 0; xi < nx; ++xi) {
        const std::size_t idx = g.node(xi, yi, ti);
        const NodeClass c = g.cls[idx];
        if (c == NodeClass::Inactive) {
          trips.emplace_back(static_cast<int>(idx), static_cast<int>(idx), 1.0);
          continue;
        }
        if (c == NodeClass::Kolmogorov) {
          trips.emplace_back(static_cast<int>(idx), static_cast<int>(idx), 1.0);
          rhs[static_cast<long>(idx)] = prob.g(g.point(idx));
          continue;
        }
        double r = 0.0;
        emit_row(
            g, prob, xi, yi, ti,
            [&](std::size_t col, double v) {
              trips.emplace_back(static_cast<int>(idx), static_cast<int>(col), v);
            },
            r, ws);
        rhs[static_cast<long>(idx)] = r;
      }
    }
  }
  SparseOperator op;
  op.matrix.resize(static_cast<long>(n), static_cast<long>(n));
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  op.rhs = std::move(rhs);
  op.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) op.rows[i] = i;
  return op;
}

DiscreteField solve_direct(const Grid& g, const ProblemData& prob,
                           SolveReport* report, const SolveOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  DiscreteField u(g);
  SolveReport rep;

  if (opts.monolithic) {
    SparseOperator op = assemble_monolithic(g, prob);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(op.matrix);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("solve_direct: monolithic factorization failed");
    u.values = lu.solve(op.rhs);
    const double bn = op.rhs.norm();
    rep.algebraic_residual =
        (op.matrix * u.values - op.rhs).norm() / (bn > 0 ? bn : 1.0);
    rep.unknowns = g.size();
  } else {
    const std::size_t nxy = g.nxy(), nt = g.t.n();
    // Initial layer: Kolmogorov data.
    for (std::size_t i = 0; i < nxy; ++i)
      if (g.cls[i] == NodeClass::Kolmogorov) u[i] = prob.g(g.point(i));

    const bool reuse = !prob.A.time_dependent && uniform_dt(g);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    Eigen::SparseMatrix<double> slab_mat;
    bool factored = false;
    RowWorkspace ws;
    std::vector<Triplet> trips;
    const std::size_t nx = g.nx_total(), ny = g.ny_total();
    for (std::size_t ti = 1; ti < nt; ++ti) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<long>(nxy));
      const std::size_t layer0 = g.node(0, 0, ti);
      const bool build = !(reuse && factored);
      if (build) trips.clear();
      for (std::size_t yi = 0; yi < ny; ++yi) {
        for (std::size_t xi = 0; xi < nx; ++xi) {
          const std::size_t local = yi * nx + xi;
          const std::size_t idx = layer0 + local;
          const NodeClass c = g.cls[idx];
          if (c == NodeClass::Inactive) {
            if (build)
              trips.emplace_back(static_cast<int>(local), static_cast<int>(local), 1.0);
            continue;
          }
          if (c == NodeClass::Kolmogorov) {
            if (build)
              trips.emplace_back(static_cast<int>(local), static_cast<int>(local), 1.0);
            rhs[static_cast<long>(local)] = prob.g(g.point(idx));
            continue;
          }
          double r = 0.0;
          emit_row(
              g, prob, xi, yi, ti,
              [&](std::size_t col, double v) {
                if (col >= layer0) {
                  if (build)
                    trips.emplace_back(static_cast<int>(local),
                                       static_cast<int>(col - layer0), v);
                } else {
                  // Previous time layer: known, move to the right-hand side.
                  rhs[static_cast<long>(local)] -= v * u[col];
                }
              },
              r, ws);
          rhs[static_cast<long>(local)] += r;
        }
      }
      if (build) {
        slab_mat.resize(static_cast<long>(nxy), static_cast<long>(nxy));
        slab_mat.setFromTriplets(trips.begin(), trips.end());
        lu.compute(slab_mat);
        if (lu.info() != Eigen::Success)
          throw std::runtime_error("solve_direct: slab factorization failed");
        factored = true;
      }
      Eigen::VectorXd sol = lu.solve(rhs);
      const double bn = rhs.norm();
      const double res = (slab_mat * sol - rhs).norm() / (bn > 0 ? bn : 1.0);
      rep.algebraic_residual = std::max(rep.algebraic_residual, res);
      if (res > opts.tol)
        throw std::runtime_error("solve_direct: slab residual above tolerance");
      for (std::size_t i = 0; i < nxy; ++i) u[layer0 + i] = sol[static_cast<long>(i)];
    }
    rep.unknowns = g.size();
    // Direct factorization: report the monolithic weak-form residual as the
    // algebraic check (slab LU residuals are at round-off).
    rep.iterations = 0;
  }

  rep.weak_residual = weak_residual(g, prob, u);
  if (opts.compute_norms) {
    NormReport nr = w_norm(g, u);
    rep.w_norm = nr.w_norm;
    DiscreteField gf = sample_field(g, prob.g);
    NormReport ng = w_norm(g, gf);
    DiscreteField gs = sample_field(g, prob.gstar);
    const double dual = transport_free_dual_norm(g, gs);
    const double denom = ng.w_norm + dual;
    rep.energy_ratio = denom > 0 ? rep.w_norm / denom : 0.0;
  }
  rep.wall_time_s = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t_start)
                        .count();
  if (report) *report = rep;
  return u;
}

DiscreteField solve_monolithic_dense(const Grid& g, const ProblemData& prob) {
  SparseOperator op = assemble_monolithic(g, prob);
  Eigen::MatrixXd M(op.matrix);
  DiscreteField u(g);
  u.values = M.partialPivLu().solve(op.rhs);
  return u;
}

double weak_residual(const Grid& g, const ProblemData& prob,
                     const DiscreteField& u) {
  SparseOperator op = assemble_monolithic(g, prob);
  Eigen::VectorXd r = op.matrix * u.values - op.rhs;
  const std::size_t nx = g.nx_total(), ny = g.ny_total(), nt = g.t.n();
  double worst = 0.0;
  std::vector<std::size_t> ix;
  std::vector<std::pair<std::size_t, double>> grad;
  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t yi = 0; yi < ny; ++yi) {
      for (std::size_t xi = 0; xi < nx; ++xi) {
        const std::size_t idx = g.node(xi, yi, ti);
        if (g.cls[idx] == NodeClass::Kolmogorov || g.cls[idx] == NodeClass::Inactive)
          continue;
        const double vol = g.x_volume(xi);
        const double wyt = g.yt_weight(yi, ti);
        // ||phi||: nodal hat, slice H^1 norm times sqrt of the (Y,t) weight.
        g.x_unindex(xi, ix);
        double grad2 = 0.0;
        std::vector<std::size_t> nix;
        for (std::size_t a = 0; a < g.m; ++a) {
          for (int off = -1; off <= 1; ++off) {
            nix = ix;
            const long kk = static_cast<long>(ix[a]) + off;
            if (kk < 0 || kk >= static_cast<long>(g.x[a].n())) continue;
            nix[a] = static_cast<std::size_t>(kk);
            const std::size_t cxi = g.x_index(nix);
            if (!g.x_active(cxi)) continue;
            x_gradient_stencil(g, a, nix, grad);
            for (const auto& [n, c] : grad)
              if (n == xi) grad2 += g.x_volume(cxi) * c * c;
          }
        }
        const double phi_norm = (std::sqrt(vol) + std::sqrt(grad2)) * std::sqrt(wyt);
        const double pairing = std::fabs(r[static_cast<long>(idx)]) * vol * wyt;
        if (phi_norm > 0) worst = std::max(worst, pairing / phi_norm);
      }
    }
  }
  return worst;
}

void transport_time_row(const Grid& g, std::size_t xi, std::size_t yi,
                        std::size_t ti,
                        const std::function<void(std::size_t, double)>& emit) {
  ProblemData dummy;
  dummy.A = identity_field(g.m);
  dummy.g = [](const Point&) { return 0.0; };
  dummy.gstar = [](const Point&) { return 0.0; };
  dummy.no_diffusion = true;
  RowWorkspace ws;
  double rhs = 0.0;
  emit_row(g, dummy, xi, yi, ti, emit, rhs, ws);
}

Eigen::SparseMatrix<double> diffusion_block_weighted(
    const Grid& g, const EllipticMatrixField& A, const Point& yt_point) {
  const std::size_t nx = g.nx_total();
  std::vector<Triplet> trips;
  std::vector<std::size_t> ix, nix;
  std::vector<std::pair<std::size_t, double>> ga, gb;
  auto point_at = [&](std::size_t xi) {
    Point p = yt_point;
    std::vector<std::size_t> w;
    g.x_unindex(xi, w);
    for (std::size_t a = 0; a < g.m; ++a) p.X[a] = g.x[a].centers[w[a]];
    return p;
  };
  for (std::size_t xi = 0; xi < nx; ++xi) {
    if (!g.x_active(xi)) continue;
    g.x_unindex(xi, ix);
    const Point p = point_at(xi);
    Eigen::MatrixXd Ap = A(p);
    // Two-point flux part: for each axis and each face touching cell xi,
    // contribute A_f/d * (u_self - u_nb) tested against the hat at xi,
    // weighted by the face share of the cell volume.
    for (std::size_t a = 0; a < g.m; ++a) {
      const auto& axx = g.x[a];
      const std::size_t k = ix[a];
      for (int side = 0; side < 2; ++side) {
        const bool lo = side == 0;
        nix = ix;
        bool nb = lo ? k > 0 : k + 1 < axx.n();
        std::size_t nxi = 0;
        if (nb) {
          nix[a] = lo ? k - 1 : k + 1;
          nxi = g.x_index(nix);
          nb = g.x_active(nxi);
        }
        const double vol_over_w = g.x_volume(xi) / axx.widths[k];
        if (nb) {
          Point q = p;
          q.X[a] = axx.centers[nix[a]];
          const double Af = 0.5 * (Ap(static_cast<long>(a), static_cast<long>(a)) +
                                   A(q)(static_cast<long>(a), static_cast<long>(a)));
          const double d = std::fabs(axx.centers[nix[a]] - axx.centers[k]);
          // Half weight: the interior face is visited from both sides.
          const double c = 0.5 * Af / d * vol_over_w;
          trips.emplace_back(static_cast<int>(xi), static_cast<int>(xi), c);
          trips.emplace_back(static_cast<int>(xi), static_cast<int>(nxi), -c);
          trips.emplace_back(static_cast<int>(nxi), static_cast<int>(nxi), c);
          trips.emplace_back(static_cast<int>(nxi), static_cast<int>(xi), -c);
        } else {
          Point q = p;
          q.X[a] = wall_coordinate(axx, k, lo);
          const double Af = A(q)(static_cast<long>(a), static_cast<long>(a));
          const double d = std::fabs(axx.centers[k] - q.X[a]);
          trips.emplace_back(static_cast<int>(xi), static_cast<int>(xi),
                             Af / d * vol_over_w);
        }
      }
    }
    // Cross terms, symmetric bilinear form with cell-centered gradients.
    if (!A.diagonal && g.m > 1) {
      for (std::size_t a = 0; a < g.m; ++a) {
        for (std::size_t b = 0; b < g.m; ++b) {
          if (a == b) continue;
          const double Aab = Ap(static_cast<long>(a), static_cast<long>(b));
          if (Aab == 0.0) continue;
          x_gradient_stencil(g, a, ix, ga);
          x_gradient_stencil(g, b, ix, gb);
          const double w = g.x_volume(xi) * Aab;
          for (const auto& [i1, c1] : ga)
            for (const auto& [i2, c2] : gb)
              trips.emplace_back(static_cast<int>(i1), static_cast<int>(i2),
                                 w * c1 * c2);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> S(static_cast<long>(nx), static_cast<long>(nx));
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

}  // namespace kfp

#include "kfp/exhaustion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kfp {

namespace {

double graph_box_distance(const LipschitzGraphDomain& omega, const Point& p) {
  const std::size_t m = p.m();
  double rho = std::fabs(p.X[m - 1]) / (4.0 * omega.M);
  for (std::size_t i = 0; i + 1 < m; ++i)
    rho = std::max(rho, std::fabs(p.X[i]));
  return rho;
}

}  // namespace

double cutoff_value(const LipschitzGraphDomain& omega, const Point& p,
                    double R) {
  if (!(R > 0.0)) throw std::invalid_argument("cutoff_value: R must be positive");
  if (!(omega.M > 0.0))
    throw std::invalid_argument("cutoff_value: graph needs M > 0");
  const double rho = graph_box_distance(omega, p);
  if (rho <= 0.5 * R) return 1.0;
  if (rho >= 0.75 * R) return 0.0;
  const double s = (rho - 0.5 * R) / (0.25 * R);
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

PointFn cutoff_data(const LipschitzGraphDomain& omega, const PointFn& g,
                    double R) {
  return [omega, g, R](const Point& p) { return g(p) * cutoff_value(omega, p, R); };
}

std::vector<double> stretched_points(double lo, double hi, double core_lo,
                                     double core_hi, std::size_t core_n,
                                     double stretch) {
  if (!(hi > lo)) throw std::invalid_argument("stretched_points: empty axis");
  if (!(stretch > 1.0))
    throw std::invalid_argument("stretched_points: stretch must exceed 1");
  core_lo = std::max(core_lo, lo);
  core_hi = std::min(core_hi, hi);
  if (!(core_hi > core_lo))
    throw std::invalid_argument("stretched_points: core outside axis");
  if (core_n < 2) core_n = 2;
  const double h = (core_hi - core_lo) / static_cast<double>(core_n);
  std::vector<double> pts;
  for (std::size_t i = 0; i <= core_n; ++i)
    pts.push_back(core_lo + h * static_cast<double>(i));
  pts.back() = core_hi;
  // Geometric extension on each side; the final point snaps to the end.
  double w = h, pos = core_hi;
  while (pos < hi - 0.25 * w) {
    w *= stretch;
    pos = std::min(pos + w, hi);
    pts.push_back(pos);
  }
  if (pts.back() < hi) pts.back() = hi;
  w = h;
  pos = core_lo;
  std::vector<double> left;
  while (pos > lo + 0.25 * w) {
    w *= stretch;
    pos = std::max(pos - w, lo);
    left.push_back(pos);
  }
  if (!left.empty() && left.back() > lo) left.back() = lo;
  pts.insert(pts.end(), left.begin(), left.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](double a, double b) { return b - a < 1e-12 * (hi - lo); }),
            pts.end());
  if (pts.front() != lo) pts.insert(pts.begin(), lo);
  if (pts.back() != hi) pts.push_back(hi);
  return pts;
}

ExhaustionResult solve_exhaustion(const LipschitzGraphDomain& omega,
                                  const std::vector<Interval>& V_Y,
                                  const Interval& T, const PointFn& g,
                                  const PointFn& gstar,
                                  const EllipticMatrixField& A,
                                  const std::vector<double>& R_list,
                                  const ProductDomain& probe,
                                  const ExhaustionOptions& opts) {
  if (R_list.empty())
    throw std::invalid_argument("solve_exhaustion: empty R list");
  for (std::size_t i = 1; i < R_list.size(); ++i)
    if (!(R_list[i] > R_list[i - 1]))
      throw std::invalid_argument("solve_exhaustion: R list must increase");
  probe.validate();
  const std::size_t m = probe.m();

  // The probe must sit inside the smallest domain and above the graph.
  const ProductDomain smallest = exhaustion_domain(omega, V_Y, T, R_list[0]);
  for (std::size_t i = 0; i < m; ++i) {
    if (probe.U_X[i].lo < smallest.U_X[i].lo ||
        probe.U_X[i].hi > smallest.U_X[i].hi ||
        probe.V_Y[i].lo < smallest.V_Y[i].lo ||
        probe.V_Y[i].hi > smallest.V_Y[i].hi)
      throw std::invalid_argument("solve_exhaustion: probe outside domain");
  }
  if (probe.T.lo < smallest.T.lo || probe.T.hi > smallest.T.hi)
    throw std::invalid_argument("solve_exhaustion: probe outside time slab");
  if (m > 1) {
    // Corners of the probe's transverse box must lie below its X floor.
    const std::size_t corners = static_cast<std::size_t>(1) << (m - 1);
    for (std::size_t c = 0; c < corners; ++c) {
      std::vector<double> xh(m - 1);
      for (std::size_t i = 0; i + 1 < m; ++i)
        xh[i] = (c >> i) & 1 ? probe.U_X[i].hi : probe.U_X[i].lo;
      if (omega.height(xh) > probe.U_X[m - 1].lo)
        throw std::invalid_argument("solve_exhaustion: probe dips below graph");
    }
  } else if (omega.height({}) > probe.U_X[0].lo) {
    throw std::invalid_argument("solve_exhaustion: probe dips below graph");
  }

  ExhaustionResult out;
  {
    std::vector<std::size_t> nx(m, opts.core_cells), ny(m, opts.core_nodes);
    out.probe_grid = build_grid(probe, nx, ny, opts.core_tnodes);
  }

  DiscreteField prev;
  for (std::size_t ri = 0; ri < R_list.size(); ++ri) {
    const double R = R_list[ri];
    const ProductDomain dom = exhaustion_domain(omega, V_Y, T, R);

    std::vector<CellAxis> xa;
    std::vector<NodeAxis> ya;
    for (std::size_t i = 0; i < m; ++i)
      xa.push_back(CellAxis::from_faces(stretched_points(
          dom.U_X[i].lo, dom.U_X[i].hi, probe.U_X[i].lo, probe.U_X[i].hi,
          opts.core_cells, opts.stretch)));
    for (std::size_t i = 0; i < m; ++i)
      ya.push_back(NodeAxis::from_nodes(stretched_points(
          dom.V_Y[i].lo, dom.V_Y[i].hi, probe.V_Y[i].lo, probe.V_Y[i].hi,
          opts.core_nodes, opts.stretch)));
    NodeAxis ta = NodeAxis::from_nodes(
        stretched_points(dom.T.lo, dom.T.hi, probe.T.lo, probe.T.hi,
                         opts.core_tnodes, opts.stretch));
    Grid grid = build_grid_axes(std::move(xa), std::move(ya), std::move(ta),
                                omega);

    ExhaustionStep st;
    st.R = R;
    ProblemData pd;
    pd.A = A;
    pd.g = cutoff_data(omega, g, R);
    pd.gstar = gstar;
    DiscreteField u = solve_direct(grid, pd, &st.report, opts.solve);

    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      if (grid.cls[idx] == NodeClass::Inactive) continue;
      st.sup_norm = std::max(st.sup_norm, std::fabs(u[idx]));
      if (grid.cls[idx] == NodeClass::Kolmogorov)
        st.data_sup = std::max(st.data_sup, std::fabs(u[idx]));
    }
    // The Dirichlet data also enters through the X-wall faces (including
    // cut-cell walls); fold those face values into the data sup so the
    // maximum-principle bound is meaningful.
    {
      std::vector<std::size_t> ix, jx;
      const std::size_t nxc = grid.nx_total();
      for (std::size_t xi = 0; xi < nxc; ++xi) {
        if (!grid.x_active(xi)) continue;
        grid.x_unindex(xi, ix);
        for (std::size_t a = 0; a < grid.m; ++a) {
          for (int side = 0; side < 2; ++side) {
            const bool hi = side == 1;
            const std::size_t k = ix[a];
            bool wall = hi ? (k + 1 == grid.x[a].n()) : (k == 0);
            if (!wall) {
              jx = ix;
              jx[a] = hi ? k + 1 : k - 1;
              wall = !grid.x_active(grid.x_index(jx));
            }
            if (!wall) continue;
            const double face =
                hi ? grid.x[a].faces[k + 1] : grid.x[a].faces[k];
            for (std::size_t ti = 1; ti < grid.t.n(); ++ti) {
              for (std::size_t yi = 0; yi < grid.ny_total(); ++yi) {
                Point p = grid.point(xi, yi, ti);
                p.X[a] = face;
                st.data_sup = std::max(st.data_sup, std::fabs(pd.g(p)));
              }
            }
          }
        }
      }
    }
    if (st.sup_norm > st.data_sup + 1e-8 * (1.0 + st.data_sup))
      out.max_principle_ok = false;

    st.probe_values = DiscreteField(out.probe_grid);
    for (std::size_t idx = 0; idx < out.probe_grid.size(); ++idx)
      st.probe_values[idx] = interpolate(u, out.probe_grid.point(idx));

    if (ri > 0) {
      double d = 0.0;
      for (std::size_t idx = 0; idx < out.probe_grid.size(); ++idx)
        d = std::max(d, std::fabs(st.probe_values[idx] - prev[idx]));
      st.sup_difference = d;
      if (ri > 1 && d > out.steps.back().sup_difference + 1e-14)
        out.differences_monotone = false;
    }
    prev = st.probe_values;
    out.steps.push_back(std::move(st));
  }
  return out;
}

}  // namespace kfp

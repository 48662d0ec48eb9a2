#include "kfp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace kfp {

CellAxis CellAxis::uniform(double lo, double hi, std::size_t n) {
  if (!(hi > lo) || n < 1) throw std::invalid_argument("CellAxis: bad interval/count");
  std::vector<double> f(n + 1);
  const double h = (hi - lo) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) f[i] = lo + h * static_cast<double>(i);
  f[n] = hi;
  return from_faces(std::move(f));
}

CellAxis CellAxis::from_faces(std::vector<double> faces) {
  CellAxis a;
  a.faces = std::move(faces);
  const std::size_t n = a.faces.size() - 1;
  a.centers.resize(n);
  a.widths.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a.faces[i + 1] > a.faces[i]))
      throw std::invalid_argument("CellAxis: faces must be increasing");
    a.centers[i] = 0.5 * (a.faces[i] + a.faces[i + 1]);
    a.widths[i] = a.faces[i + 1] - a.faces[i];
  }
  return a;
}

NodeAxis NodeAxis::uniform(double lo, double hi, std::size_t n) {
  if (!(hi > lo) || n < 2) throw std::invalid_argument("NodeAxis: bad interval/count");
  std::vector<double> v(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + h * static_cast<double>(i);
  v[n - 1] = hi;
  return from_nodes(std::move(v));
}

NodeAxis NodeAxis::from_nodes(std::vector<double> nodes) {
  NodeAxis a;
  a.nodes = std::move(nodes);
  const std::size_t n = a.nodes.size();
  a.weights.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(a.nodes[i + 1] > a.nodes[i]))
      throw std::invalid_argument("NodeAxis: nodes must be increasing");
    const double h = a.nodes[i + 1] - a.nodes[i];
    a.weights[i] += 0.5 * h;
    a.weights[i + 1] += 0.5 * h;
  }
  return a;
}

std::size_t Grid::nx_total() const {
  std::size_t p = 1;
  for (const auto& a : x) p *= a.n();
  return p;
}

std::size_t Grid::ny_total() const {
  std::size_t p = 1;
  for (const auto& a : y) p *= a.n();
  return p;
}

std::size_t Grid::x_index(const std::vector<std::size_t>& ix) const {
  std::size_t idx = 0, stride = 1;
  for (std::size_t a = 0; a < m; ++a) {
    idx += ix[a] * stride;
    stride *= x[a].n();
  }
  return idx;
}

std::size_t Grid::y_index(const std::vector<std::size_t>& iy) const {
  std::size_t idx = 0, stride = 1;
  for (std::size_t a = 0; a < m; ++a) {
    idx += iy[a] * stride;
    stride *= y[a].n();
  }
  return idx;
}

void Grid::x_unindex(std::size_t xi, std::vector<std::size_t>& ix) const {
  ix.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    ix[a] = xi % x[a].n();
    xi /= x[a].n();
  }
}

void Grid::y_unindex(std::size_t yi, std::vector<std::size_t>& iy) const {
  iy.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    iy[a] = yi % y[a].n();
    yi /= y[a].n();
  }
}

Point Grid::point(std::size_t xi, std::size_t yi, std::size_t ti) const {
  Point p = origin(m);
  std::vector<std::size_t> ix, iy;
  x_unindex(xi, ix);
  y_unindex(yi, iy);
  for (std::size_t a = 0; a < m; ++a) {
    p.X[a] = x[a].centers[ix[a]];
    p.Y[a] = y[a].nodes[iy[a]];
  }
  p.t = t.nodes[ti];
  return p;
}

Point Grid::point(std::size_t node_idx) const {
  const std::size_t nx = nx_total(), ny = ny_total();
  const std::size_t xi = node_idx % nx;
  const std::size_t yi = (node_idx / nx) % ny;
  const std::size_t ti = node_idx / (nx * ny);
  return point(xi, yi, ti);
}

double Grid::x_volume(std::size_t xi) const {
  std::vector<std::size_t> ix;
  x_unindex(xi, ix);
  double v = 1.0;
  for (std::size_t a = 0; a < m; ++a) v *= x[a].widths[ix[a]];
  return v;
}

double Grid::yt_weight(std::size_t yi, std::size_t ti) const {
  std::vector<std::size_t> iy;
  y_unindex(yi, iy);
  double w = t.weights[ti];
  for (std::size_t a = 0; a < m; ++a) w *= y[a].weights[iy[a]];
  return w;
}

std::size_t Grid::count(NodeClass c) const {
  return static_cast<std::size_t>(std::count(cls.begin(), cls.end(), c));
}

namespace {

void classify_nodes(Grid& g) {
  const std::size_t nx = g.nx_total(), ny = g.ny_total(), nt = g.t.n();
  g.cls.assign(g.size(), NodeClass::Interior);
  std::vector<std::size_t> ix, iy;
  for (std::size_t xi = 0; xi < nx; ++xi) {
    g.x_unindex(xi, ix);
    const bool active = g.x_active(xi);
    std::vector<double> X(g.m);
    for (std::size_t a = 0; a < g.m; ++a) X[a] = g.x[a].centers[ix[a]];
    for (std::size_t ti = 0; ti < nt; ++ti) {
      for (std::size_t yi = 0; yi < ny; ++yi) {
        const std::size_t idx = g.node(xi, yi, ti);
        if (!active) {
          g.cls[idx] = NodeClass::Inactive;
          continue;
        }
        g.y_unindex(yi, iy);
        bool on_boundary = (ti == 0) || (ti == nt - 1);
        bool kolmogorov = (ti == 0);  // initial-time face, (X,-1).(0,-1) = 1
        for (std::size_t b = 0; b < g.m; ++b) {
          if (iy[b] == 0) {
            on_boundary = true;
            if (-X[b] > 0.0) kolmogorov = true;
          }
          if (iy[b] == g.y[b].n() - 1) {
            on_boundary = true;
            if (X[b] > 0.0) kolmogorov = true;
          }
        }
        if (on_boundary)
          g.cls[idx] = kolmogorov ? NodeClass::Kolmogorov : NodeClass::Free;
      }
    }
  }
}

}  // namespace

Grid build_grid(const ProductDomain& domain, const std::vector<std::size_t>& nx,
                const std::vector<std::size_t>& ny, std::size_t nt) {
  domain.validate();
  const std::size_t m = domain.m();
  if (nx.size() != m || ny.size() != m)
    throw std::invalid_argument("build_grid: per-axis counts must match m");
  for (std::size_t a = 0; a < m; ++a)
    if (nx[a] < 3 || ny[a] < 3)
      throw std::invalid_argument("build_grid: at least 3 nodes per axis");
  if (nt < 3)
    throw std::invalid_argument(
        "build_grid: nt >= 3 required (initial data layer plus evolution)");
  std::vector<CellAxis> x;
  std::vector<NodeAxis> y;
  for (std::size_t a = 0; a < m; ++a) {
    x.push_back(CellAxis::uniform(domain.U_X[a].lo, domain.U_X[a].hi, nx[a]));
    y.push_back(NodeAxis::uniform(domain.V_Y[a].lo, domain.V_Y[a].hi, ny[a]));
  }
  return build_grid_axes(std::move(x), std::move(y),
                         NodeAxis::uniform(domain.T.lo, domain.T.hi, nt));
}

Grid build_grid_axes(std::vector<CellAxis> x, std::vector<NodeAxis> y,
                     NodeAxis t,
                     const std::optional<LipschitzGraphDomain>& graph) {
  Grid g;
  g.m = x.size();
  if (y.size() != g.m) throw std::invalid_argument("build_grid_axes: axis mismatch");
  g.x = std::move(x);
  g.y = std::move(y);
  g.t = std::move(t);
  g.graph = graph;
  if (graph) {
    const std::size_t nx = g.nx_total();
    g.xmask.assign(nx, 1);
    std::vector<std::size_t> ix;
    for (std::size_t xi = 0; xi < nx; ++xi) {
      g.x_unindex(xi, ix);
      std::vector<double> head(g.m > 0 ? g.m - 1 : 0);
      for (std::size_t a = 0; a + 1 < g.m; ++a) head[a] = g.x[a].centers[ix[a]];
      const double xm = g.x[g.m - 1].centers[ix[g.m - 1]];
      if (xm <= graph->height(head)) g.xmask[xi] = 0;
    }
  }
  classify_nodes(g);
  return g;
}

void x_gradient_stencil(const Grid& g, std::size_t a,
                        const std::vector<std::size_t>& ix,
                        std::vector<std::pair<std::size_t, double>>& out) {
  out.clear();
  const auto& ax = g.x[a];
  std::vector<std::size_t> n = ix;
  const std::size_t k = ix[a];
  const std::size_t self = g.x_index(ix);
  bool has_lo = k > 0, has_hi = k + 1 < ax.n();
  std::size_t lo = 0, hi = 0;
  if (has_lo) {
    n[a] = k - 1;
    lo = g.x_index(n);
    has_lo = g.x_active(lo);
  }
  if (has_hi) {
    n[a] = k + 1;
    hi = g.x_index(n);
    has_hi = g.x_active(hi);
  }
  if (has_lo && has_hi) {
    const double d = ax.centers[k + 1] - ax.centers[k - 1];
    out.push_back({hi, 1.0 / d});
    out.push_back({lo, -1.0 / d});
  } else if (has_hi) {
    const double d = ax.centers[k + 1] - ax.centers[k];
    out.push_back({hi, 1.0 / d});
    out.push_back({self, -1.0 / d});
  } else if (has_lo) {
    const double d = ax.centers[k] - ax.centers[k - 1];
    out.push_back({self, 1.0 / d});
    out.push_back({lo, -1.0 / d});
  }
}

DiscreteField sample_field(const Grid& g,
                           const std::function<double(const Point&)>& f) {
  DiscreteField u(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.cls[i] != NodeClass::Inactive) u[i] = f(g.point(i));
  return u;
}

namespace {

// Locate p in a sorted coordinate array; returns (i, w) with value
// approximated by (1-w)*v[i] + w*v[i+1], clamped at the ends.
std::pair<std::size_t, double> locate(const std::vector<double>& c, double v) {
  if (v <= c.front()) return {0, 0.0};
  if (v >= c.back()) return {c.size() - 2, 1.0};
  auto it = std::upper_bound(c.begin(), c.end(), v);
  std::size_t i = static_cast<std::size_t>(it - c.begin()) - 1;
  if (i > c.size() - 2) i = c.size() - 2;
  return {i, (v - c[i]) / (c[i + 1] - c[i])};
}

}  // namespace

double interpolate(const DiscreteField& u, const Point& p) {
  const Grid& g = *u.grid;
  const std::size_t m = g.m;
  // Per-axis lower index and weight; 2m+1 axes.
  std::vector<std::size_t> i0(2 * m + 1);
  std::vector<double> w(2 * m + 1);
  for (std::size_t a = 0; a < m; ++a) {
    auto [i, ww] = locate(g.x[a].centers, p.X[a]);
    i0[a] = i;
    w[a] = ww;
  }
  for (std::size_t a = 0; a < m; ++a) {
    auto [i, ww] = locate(g.y[a].nodes, p.Y[a]);
    i0[m + a] = i;
    w[m + a] = ww;
  }
  {
    auto [i, ww] = locate(g.t.nodes, p.t);
    i0[2 * m] = i;
    w[2 * m] = ww;
  }
  double acc = 0.0;
  const std::size_t corners = std::size_t{1} << (2 * m + 1);
  std::vector<std::size_t> ix(m), iy(m);
  for (std::size_t c = 0; c < corners; ++c) {
    double wt = 1.0;
    for (std::size_t d = 0; d < 2 * m + 1; ++d) {
      const bool hi = (c >> d) & 1u;
      wt *= hi ? w[d] : 1.0 - w[d];
    }
    if (wt == 0.0) continue;
    for (std::size_t a = 0; a < m; ++a) ix[a] = i0[a] + ((c >> a) & 1u);
    for (std::size_t a = 0; a < m; ++a) iy[a] = i0[m + a] + ((c >> (m + a)) & 1u);
    const std::size_t ti = i0[2 * m] + ((c >> (2 * m)) & 1u);
    acc += wt * u[g.node(g.x_index(ix), g.y_index(iy), ti)];
  }
  return acc;
}

}  // namespace kfp

#include "kfp/geometry.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kfp {

Point::Point(std::vector<double> X_, std::vector<double> Y_, double t_)
    : X(std::move(X_)), Y(std::move(Y_)), t(t_) {
  if (X.size() != Y.size())
    throw std::invalid_argument("Point: X and Y must have the same dimension");
}

bool Point::finite() const {
  for (double v : X)
    if (!std::isfinite(v)) return false;
  for (double v : Y)
    if (!std::isfinite(v)) return false;
  return std::isfinite(t);
}

Point origin(std::size_t m) {
  return Point(std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), 0.0);
}

bool ProductDomain::contains(const Point& p) const {
  for (std::size_t i = 0; i < U_X.size(); ++i)
    if (p.X[i] <= U_X[i].lo || p.X[i] >= U_X[i].hi) return false;
  for (std::size_t i = 0; i < V_Y.size(); ++i)
    if (p.Y[i] <= V_Y[i].lo || p.Y[i] >= V_Y[i].hi) return false;
  return p.t > T.lo && p.t < T.hi;
}

void ProductDomain::validate() const {
  if (U_X.size() != V_Y.size())
    throw std::invalid_argument("domain: X and Y dimension mismatch");
  for (const auto& iv : U_X)
    if (!(iv.length() > 0)) throw std::invalid_argument("domain: degenerate X box");
  for (const auto& iv : V_Y)
    if (!(iv.length() > 0)) throw std::invalid_argument("domain: degenerate Y box");
  if (!(T.length() > 0)) throw std::invalid_argument("domain: degenerate time interval");
}

LipschitzGraphDomain make_graph_domain(const std::string& family, double M,
                                       const std::vector<double>& params,
                                       std::size_t m) {
  LipschitzGraphDomain d;
  d.M = M;
  d.family = family;
  d.params = params;
  if (family == "plane") {
    // psi(x) = params . x (+ params[m-1] as offset when given one extra entry)
    d.psi = [params, m](const std::vector<double>& x) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size() && i < params.size(); ++i)
        s += params[i] * x[i];
      if (params.size() > m - 1) s += params[m - 1];
      return s;
    };
  } else if (family == "cone") {
    double slope = params.empty() ? M : params[0];
    d.psi = [slope](const std::vector<double>& x) {
      double n2 = 0.0;
      for (double v : x) n2 += v * v;
      return slope * std::sqrt(n2);
    };
  } else if (family == "sine") {
    double amp = params.size() > 0 ? params[0] : 0.5;
    double freq = params.size() > 1 ? params[1] : 1.0;
    d.psi = [amp, freq](const std::vector<double>& x) {
      double s = 0.0;
      for (double v : x) s += std::sin(freq * v);
      return amp * s;
    };
  } else {
    throw std::invalid_argument("unknown psi family: " + family);
  }
  return d;
}

std::vector<double> YtFace::normal(std::size_t m) const {
  std::vector<double> n(m + 1, 0.0);
  n[static_cast<std::size_t>(axis)] = static_cast<double>(side);
  return n;
}

double inflow_indicator(const YtFace& face, const std::vector<double>& X) {
  // (X,-1) . N_{Y,t} for the axis-aligned face normal.
  const std::size_t m = X.size();
  if (face.axis == static_cast<int>(m)) return -1.0 * face.side;
  return X[static_cast<std::size_t>(face.axis)] * face.side;
}

BoundaryClass classify_boundary(const YtFace& face, const std::vector<double>& X) {
  return inflow_indicator(face, X) > 0.0 ? BoundaryClass::Kolmogorov
                                         : BoundaryClass::Free;
}

Point compose(const Point& p, const Point& q) {
  const std::size_t m = p.m();
  Point r = origin(m);
  for (std::size_t i = 0; i < m; ++i) {
    r.X[i] = p.X[i] + q.X[i];
    r.Y[i] = p.Y[i] + q.Y[i] - q.t * p.X[i];
  }
  r.t = p.t + q.t;
  return r;
}

Point inverse(const Point& p) {
  const std::size_t m = p.m();
  Point r = origin(m);
  for (std::size_t i = 0; i < m; ++i) {
    r.X[i] = -p.X[i];
    r.Y[i] = -p.Y[i] - p.t * p.X[i];
  }
  r.t = -p.t;
  return r;
}

Point dilate(double r, const Point& p) {
  if (!(r > 0.0)) throw std::invalid_argument("dilate: r must be positive");
  const std::size_t m = p.m();
  Point q = origin(m);
  for (std::size_t i = 0; i < m; ++i) {
    q.X[i] = r * p.X[i];
    q.Y[i] = r * r * r * p.Y[i];
  }
  q.t = r * r * p.t;
  return q;
}

double homogeneous_norm(const Point& p) {
  double nx2 = 0.0, ny2 = 0.0;
  for (double v : p.X) nx2 += v * v;
  for (double v : p.Y) ny2 += v * v;
  return std::sqrt(nx2) + std::cbrt(std::sqrt(ny2)) + std::sqrt(std::fabs(p.t));
}

double quasi_distance(const Point& p, const Point& q) {
  return 0.5 * (homogeneous_norm(compose(inverse(q), p)) +
                homogeneous_norm(compose(inverse(p), q)));
}

double measure_quasi_triangle_constant(std::size_t m, int triples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  auto rp = [&]() {
    Point p = origin(m);
    for (auto& v : p.X) v = nd(rng);
    for (auto& v : p.Y) v = nd(rng);
    p.t = nd(rng);
    return p;
  };
  double cmax = 0.0;
  for (int k = 0; k < triples; ++k) {
    Point p = rp(), q = rp(), w = rp();
    double lhs = quasi_distance(p, q);
    double rhs = quasi_distance(p, w) + quasi_distance(w, q);
    if (rhs > 0.0) cmax = std::max(cmax, lhs / rhs);
  }
  return cmax;
}

ProductDomain exhaustion_domain(const LipschitzGraphDomain& omega,
                                const std::vector<Interval>& V_Y,
                                const Interval& T, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("exhaustion_domain: R must be positive");
  const std::size_t m = V_Y.size();
  ProductDomain d;
  d.U_X.resize(m);
  // First m-1 axes: |x_i| < R; last axis: psi-floor < x_m < 4MR. The
  // bounding box uses the minimum of psi over the cross-section; the
  // staircase cut is done per node by the grid builder.
  double psi_lo = 0.0;
  if (m == 1) {
    psi_lo = omega.height({});
  } else {
    // psi is Lipschitz with constant M, so on |x_i| < R its values lie
    // within psi(0) +/- M sqrt(m-1) R.
    psi_lo = omega.height(std::vector<double>(m - 1, 0.0)) -
             omega.M * std::sqrt(static_cast<double>(m - 1)) * R;
  }
  for (std::size_t i = 0; i + 1 < m; ++i) d.U_X[i] = {-R, R};
  d.U_X[m - 1] = {psi_lo, 4.0 * omega.M * R};
  if (!(d.U_X[m - 1].length() > 0))
    throw std::invalid_argument("exhaustion_domain: empty X slab (check M)");
  d.V_Y.resize(m);
  const double r3 = R * R * R, r2 = R * R;
  for (std::size_t i = 0; i < m; ++i) d.V_Y[i] = {r3 * V_Y[i].lo, r3 * V_Y[i].hi};
  d.T = {r2 * T.lo, r2 * T.hi};
  return d;
}

std::string domain_to_json(const ProductDomain& d) {
  nlohmann::json j;
  j["type"] = "box";
  for (const auto& iv : d.U_X) j["U_X"].push_back({iv.lo, iv.hi});
  for (const auto& iv : d.V_Y) j["V_Yt"].push_back({iv.lo, iv.hi});
  j["V_Yt"].push_back({d.T.lo, d.T.hi});
  return j.dump();
}

ProductDomain domain_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.at("type") != "box")
    throw std::invalid_argument("domain_from_json: expected type \"box\"");
  ProductDomain d;
  for (const auto& iv : j.at("U_X")) d.U_X.push_back({iv.at(0), iv.at(1)});
  const auto& v = j.at("V_Yt");
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    d.V_Y.push_back({v[i].at(0), v[i].at(1)});
  d.T = {v.back().at(0), v.back().at(1)};
  d.validate();
  return d;
}

}  // namespace kfp

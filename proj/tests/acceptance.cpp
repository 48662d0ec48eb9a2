// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. The kernel gates (criterion 12) are evaluated before the
// prototype convergence study (criterion 4) and gate it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kfp/assemble.hpp"
#include "kfp/coefficients.hpp"
#include "kfp/exhaustion.hpp"
#include "kfp/geometry.hpp"
#include "kfp/grid.hpp"
#include "kfp/kernel.hpp"
#include "kfp/spaces.hpp"
#include "kfp/stochastic.hpp"
#include "kfp/variational.hpp"

using namespace kfp;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok) {
  std::printf("%s  criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion,
              what.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

Point rand_point(std::mt19937_64& rng, std::size_t m) {
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  Point p = origin(m);
  for (std::size_t i = 0; i < m; ++i) {
    p.X[i] = ud(rng);
    p.Y[i] = ud(rng);
  }
  p.t = ud(rng);
  return p;
}

ProductDomain box1() {
  ProductDomain d;
  d.U_X = {{-1.0, 1.0}};
  d.V_Y = {{-1.0, 1.0}};
  d.T = {0.0, 1.0};
  return d;
}

// --------------------------------------------------------- criterion 1 --

bool criterion1() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ur(0.1, 3.0);
  for (std::size_t m : {std::size_t{1}, std::size_t{2}}) {
    for (int k = 0; k < 1000; ++k) {
      const Point p = rand_point(rng, m), q = rand_point(rng, m),
                  w = rand_point(rng, m);
      // Group law: associativity and inverses.
      const Point e = compose(inverse(p), p);
      double err = std::fabs(e.t);
      for (std::size_t i = 0; i < m; ++i)
        err = std::max({err, std::fabs(e.X[i]), std::fabs(e.Y[i])});
      if (err > 1e-12) return false;
      const Point ab = compose(compose(p, q), w);
      const Point ba = compose(p, compose(q, w));
      double aerr = std::fabs(ab.t - ba.t);
      for (std::size_t i = 0; i < m; ++i)
        aerr = std::max({aerr, std::fabs(ab.X[i] - ba.X[i]),
                         std::fabs(ab.Y[i] - ba.Y[i])});
      if (aerr > 1e-12 * (1.0 + homogeneous_norm(ab))) return false;
      // Dilation homogeneity.
      const double r = ur(rng);
      const double lhs = homogeneous_norm(dilate(r, p));
      const double rhs = r * homogeneous_norm(p);
      if (std::fabs(lhs - rhs) > 1e-12 * (1.0 + rhs)) return false;
      // Quasi-distance symmetry.
      const double d1 = quasi_distance(p, q), d2 = quasi_distance(q, p);
      if (std::fabs(d1 - d2) > 1e-12 * (1.0 + d1)) return false;
    }
  }
  return true;
}

// --------------------------------------------------------- criterion 2 --

bool criterion2() {
  // Even nx keeps cell centers off x = 0 so the sign rule is unambiguous.
  Grid g = build_grid(box1(), {8}, {7}, 5);
  const std::size_t last_y = g.y[0].n() - 1, last_t = g.t.n() - 1;
  for (std::size_t yi = 0; yi <= last_y; ++yi)
    for (std::size_t xi = 0; xi < g.nx_total(); ++xi) {
      // Initial-time face: 100% Kolmogorov.
      if (g.cls[g.node(xi, yi, 0)] != NodeClass::Kolmogorov) return false;
      // Final-time face away from the y-walls: 0% Kolmogorov.
      if (yi != 0 && yi != last_y &&
          g.cls[g.node(xi, yi, last_t)] != NodeClass::Free)
        return false;
    }
  // y-faces split exactly by sign(x) away from the time endpoints.
  for (std::size_t ti = 1; ti <= last_t; ++ti)
    for (std::size_t xi = 0; xi < g.nx_total(); ++xi) {
      const double xc = g.x[0].centers[xi];
      const NodeClass lo = g.cls[g.node(xi, 0, ti)];
      const NodeClass hi = g.cls[g.node(xi, last_y, ti)];
      if (lo != (xc < 0.0 ? NodeClass::Kolmogorov : NodeClass::Free))
        return false;
      if (hi != (xc > 0.0 ? NodeClass::Kolmogorov : NodeClass::Free))
        return false;
    }
  return true;
}

// --------------------------------------------------------- criterion 3 --

bool criterion3() {
  const double value = 3.25;
  struct Fam {
    const char* name;
    std::vector<double> params;
    bool variational;
  };
  const std::vector<Fam> fams = {{"constant", {}, true},
                                 {"constant", {2.0}, true},
                                 {"checkerboard", {4.0, 0.25}, true},
                                 {"periodic", {}, false}};
  Grid g = build_grid(box1(), {8}, {6}, 5);
  for (const Fam& f : fams) {
    ProblemData prob;
    prob.A = make_coefficient_field(f.name, 4.0, f.params, 1);
    prob.g = [value](const Point&) { return value; };
    prob.gstar = [](const Point&) { return 0.0; };
    DiscreteField u = solve_direct(g, prob);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (std::fabs(u[i] - value) > 1e-12 * value) return false;
    if (f.variational) {
      MinimizerPair mp = minimize_joint(g, prob);
      for (std::size_t i = 0; i < g.size(); ++i)
        if (std::fabs(mp.f[i] - value) > 1e-12 * value) return false;
    }
  }
  return true;
}

// --------------------------------------------------------- criterion 12 --

bool criterion12() {
  const Point p0 = origin(1);
  auto quad2 = [](const std::function<double(double, double)>& f, double xa,
                  double xb, double ya, double yb, int n) {
    const double hx = (xb - xa) / n, hy = (yb - ya) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double wx = (i == 0 || i == n) ? 0.5 : 1.0;
      for (int j = 0; j <= n; ++j) {
        const double wy = (j == 0 || j == n) ? 0.5 : 1.0;
        acc += wx * wy * f(xa + i * hx, ya + j * hy);
      }
    }
    return acc * hx * hy;
  };
  auto eval = [&](double x, double y, double t) {
    return prototype_kernel(Point({x}, {y}, t), p0);
  };
  // Gate 1: unit mass to 1e-6.
  for (double s : {0.25, 1.0}) {
    const double sx = std::sqrt(2.0 * s), sy = std::sqrt(2.0 * s * s * s / 3.0);
    const double mass =
        quad2([&](double x, double y) { return eval(x, y, s); }, -10.0 * sx,
              10.0 * sx, -10.0 * sy, 10.0 * sy, 400);
    if (std::fabs(mass - 1.0) > 1e-6) return false;
  }
  // Gate 2: Chapman-Kolmogorov to 1e-4.
  {
    Point pa({0.1}, {0.0}, 0.0);
    Point pb({-0.4}, {0.2}, 1.0);
    const double direct = prototype_kernel(pb, pa);
    const double conv = quad2(
        [&](double xz, double yz) {
          Point z({xz}, {yz}, 0.4);
          return prototype_kernel(pb, z) * prototype_kernel(z, pa);
        },
        -4.0, 4.0, -3.0, 3.0, 400);
    if (std::fabs(conv - direct) > 1e-4 * direct) return false;
  }
  // Gate 3: centered-difference residual of the prototype operator decays
  // at order >= 2.
  {
    const double x = 1.0, y = 0.5, t = 1.0;
    auto residual = [&](double h) {
      const double uxx =
          (eval(x + h, y, t) - 2.0 * eval(x, y, t) + eval(x - h, y, t)) /
          (h * h);
      const double uy = (eval(x, y + h, t) - eval(x, y - h, t)) / (2.0 * h);
      const double ut = (eval(x, y, t + h) - eval(x, y, t - h)) / (2.0 * h);
      return std::fabs(uxx + x * uy - ut);
    };
    const double r1 = residual(0.1), r2 = residual(0.05), r3 = residual(0.025);
    if (std::log2(r1 / r2) < 2.0 - 0.1) return false;
    if (std::log2(r2 / r3) < 2.0 - 0.1) return false;
  }
  return true;
}

// --------------------------------------------------------- criterion 4 --

bool criterion4() {
  const double t_start = now_s();
  ProductDomain dom = box1();
  Point pole({0.0}, {0.0}, -0.5);
  std::vector<double> errors;
  for (std::size_t n : {16, 32, 64}) {
    Grid g = build_grid(dom, {n}, {n}, n);
    ProblemData prob;
    prob.A = identity_field(1);
    prob.g = kernel_boundary_data(dom, pole);
    prob.gstar = [](const Point&) { return 0.0; };
    DiscreteField u = solve_direct(g, prob);
    // Weighted L2 error over the interior of the terminal time layer (the
    // standard parabolic error measure, deepest into the evolution).
    const std::size_t ti = g.t.n() - 1;
    double num = 0.0, den = 0.0;
    for (std::size_t yi = 1; yi + 1 < g.ny_total(); ++yi)
      for (std::size_t xi = 0; xi < g.nx_total(); ++xi) {
        const std::size_t idx = g.node(xi, yi, ti);
        const double e = prototype_kernel(g.point(idx), pole);
        const double w = g.x_volume(xi) * g.yt_weight(yi, ti);
        num += w * (u[idx] - e) * (u[idx] - e);
        den += w * e * e;
      }
    errors.push_back(std::sqrt(num / den));
  }
  const double o1 = std::log2(errors[0] / errors[1]);
  const double o2 = std::log2(errors[1] / errors[2]);
  const double elapsed = now_s() - t_start;
  std::printf("      convergence: errors %.3e %.3e %.3e orders %.2f %.2f "
              "(%.1fs)\n",
              errors[0], errors[1], errors[2], o1, o2, elapsed);
  return o1 >= 1.0 && o2 >= 1.0 && elapsed <= 60.0;
}

// --------------------------------------------------------- criterion 5 --

bool criterion5() {
  struct Case {
    EllipticMatrixField A;
    PointFn g;
    PointFn gstar;
  };
  auto sine = [](const Point& p) {
    return std::sin(1.2 * (p.X[0] + p.Y[0] + p.t));
  };
  auto bump = [](const Point& p) {
    return std::exp(-(p.X[0] * p.X[0] + p.Y[0] * p.Y[0]));
  };
  auto zero = [](const Point&) { return 0.0; };
  auto source = [](const Point& p) { return 0.4 * p.X[0] - 0.2 * p.Y[0]; };
  ProductDomain dom = box1();
  Point pole({0.0}, {0.0}, -0.5);
  std::vector<Case> cases;
  cases.push_back({identity_field(1), sine, PointFn(zero)});
  cases.push_back({make_coefficient_field("checkerboard", 4.0, {4.0, 0.25}, 1),
                   sine, PointFn(source)});
  cases.push_back({make_coefficient_field("constant", 4.0, {2.0}, 1), bump,
                   PointFn(source)});
  cases.push_back(
      {mollify(make_coefficient_field("checkerboard", 4.0, {4.0, 0.25}, 1),
               0.1),
       bump, PointFn(zero)});
  cases.push_back({identity_field(1), kernel_boundary_data(dom, pole),
                   PointFn(zero)});
  Grid g = build_grid(dom, {8}, {6}, 5);
  for (const Case& c : cases) {
    ProblemData prob{c.A, c.g, c.gstar};
    DiscreteField u = solve_direct(g, prob);
    MinimizerPair mp = minimize_joint(g, prob);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      num += (u[i] - mp.f[i]) * (u[i] - mp.f[i]);
      den += u[i] * u[i];
    }
    if (std::sqrt(num / std::max(den, 1e-300)) > 1e-8) return false;
  }
  return true;
}

// --------------------------------------------------------- criterion 6 --

bool criterion6() {
  Grid g = build_grid(box1(), {6}, {5}, 4);
  ProblemData prob;
  prob.A = make_coefficient_field("constant", 4.0, {1.5}, 1);
  prob.g = [](const Point& p) {
    return std::sin(1.1 * p.X[0]) + 0.4 * std::cos(0.8 * p.Y[0]) - 0.3 * p.t;
  };
  prob.gstar = [](const Point& p) { return 0.25 * p.X[0]; };
  DiscreteField u = solve_direct(g, prob);
  JReport at = evaluate_J(g, prob, u);
  if (at.value > 1e-10 * u.values.squaredNorm()) return false;

  DiscreteField v = sample_field(g, [](const Point& p) {
    return std::sin(2.0 * p.X[0]) * (0.5 + 0.5 * p.Y[0]);
  });
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.cls[i] == NodeClass::Kolmogorov) v[i] = 0.0;
  const std::vector<double> eps = {0.4, 0.2, 0.1, 0.05};
  std::vector<double> lg, le;
  for (double e : eps) {
    DiscreteField w = u;
    w.values += e * v.values;
    lg.push_back(std::log(evaluate_J(g, prob, w).value));
    le.push_back(std::log(e));
  }
  // Least-squares slope of log J against log eps.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    sx += le[k];
    sy += lg[k];
    sxx += le[k] * le[k];
    sxy += le[k] * lg[k];
  }
  const double n = static_cast<double>(eps.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  std::printf("      growth exponent %.4f\n", slope);
  return std::fabs(slope - 2.0) <= 0.05;
}

// --------------------------------------------------------- criterion 7 --

bool criterion7() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::uniform_real_distribution<double> ua(0.2, 5.0);  // kappa <= 10 overall
  for (int trial = 0; trial < 20; ++trial) {
    const double a = ua(rng);
    const double c0 = ud(rng), c1 = ud(rng), c2 = ud(rng);
    const double w0 = 1.0 + std::fabs(ud(rng)), w1 = 1.0 + std::fabs(ud(rng));
    ProblemData prob;
    prob.A = make_coefficient_field("constant", 10.0, {a}, 1);
    prob.g = [=](const Point& p) {
      return c0 * std::sin(w0 * p.X[0]) + c1 * std::cos(w1 * p.Y[0]) +
             c2 * std::sin(p.t + p.X[0] - p.Y[0]);
    };
    prob.gstar = [](const Point&) { return 0.0; };
    Grid g = build_grid(box1(), {8}, {7}, 6);
    DiscreteField u = solve_direct(g, prob);
    // Data range over the Kolmogorov nodes and the X-wall faces, where the
    // Dirichlet values enter the scheme.
    double gmin = 1e300, gmax = -1e300;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g.cls[i] == NodeClass::Kolmogorov) {
        gmin = std::min(gmin, u[i]);
        gmax = std::max(gmax, u[i]);
      }
    for (int side = 0; side < 2; ++side) {
      const double xf = side == 0 ? g.x[0].faces.front() : g.x[0].faces.back();
      for (std::size_t ti = 1; ti < g.t.n(); ++ti)
        for (std::size_t yi = 0; yi < g.ny_total(); ++yi) {
          Point p = g.point(0, yi, ti);
          p.X[0] = xf;
          const double gv = prob.g(p);
          gmin = std::min(gmin, gv);
          gmax = std::max(gmax, gv);
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i)
      if (u[i] < gmin - 1e-10 || u[i] > gmax + 1e-10) return false;
  }
  return true;
}

// --------------------------------------------------------- criterion 8 --

bool criterion8() {
  ProductDomain slab;
  slab.U_X = {{0.0, 1.0}};
  slab.V_Y = {{-1.0, 1.0}};
  slab.T = {0.0, 1.0};
  Grid fine = build_grid(slab, {128}, {3}, 3);
  const double c = poincare_constant_x(fine);
  if (std::fabs(c - 1.0 / M_PI) > 0.01 / M_PI) return false;

  Grid g = build_grid(box1(), {8}, {6}, 5);
  KineticPoincareReport rep = kinetic_poincare_check(g, 100, 808);
  if (rep.ratios.size() != 100) return false;
  for (double r : rep.ratios)
    if (!(r > 0.0) || !std::isfinite(r)) return false;
  return rep.max_ratio <= 10.0 * rep.median_ratio;
}

// --------------------------------------------------------- criterion 9 --

bool criterion9() {
  const double t_start = now_s();
  ProductDomain dom;
  dom.U_X = {{-4.0, 4.0}};
  dom.V_Y = {{-6.0, 6.0}};
  dom.T = {0.0, 0.55};
  auto phi = [](const Point& p) { return std::sin(p.X[0]) + 0.3 * p.Y[0]; };
  auto A = identity_field(1);

  ProblemData prob;
  prob.A = A;
  prob.g = phi;
  prob.gstar = [](const Point&) { return 0.0; };
  Grid g = build_grid(dom, {160}, {25}, 111);
  DiscreteField u = solve_direct(g, prob);

  const std::vector<Point> probes = {
      Point({0.0}, {0.0}, 0.30), Point({0.5}, {-0.5}, 0.25),
      Point({-0.7}, {0.8}, 0.40), Point({1.2}, {0.0}, 0.50),
      Point({0.0}, {-1.0}, 0.20)};
  McOptions opts;
  opts.paths = 100000;
  opts.seed = 909;
  opts.trapezoid = true;
  bool ok = true;
  for (const Point& p : probes) {
    McOptions po = opts;
    po.dt = (p.t - dom.T.lo) / 512.0;
    McEstimate est = estimate_solution(dom, A, phi, p, po);
    const double ref = interpolate(u, p);
    const double diff = std::fabs(est.mean - ref);
    std::printf("      probe (%.2f,%.2f,%.2f): mc %.6f ref %.6f |d| %.2e "
                "3se %.2e\n",
                p.X[0], p.Y[0], p.t, est.mean, ref, diff, 3.0 * est.std_error);
    if (diff > 3.0 * est.std_error) ok = false;
    if (est.lost_fraction > 0.0) ok = false;
  }
  McOptions mo = opts;
  mo.dt = 0.30 / 512.0;
  MeasureEstimate mu = estimate_parabolic_measure(dom, A, probes[0], mo);
  double total = 0.0;
  for (double w : mu.masses) total += w;
  if (std::fabs(total - 1.0) >
      3.0 / std::sqrt(static_cast<double>(opts.paths)))
    ok = false;
  const double elapsed = now_s() - t_start;
  std::printf("      monte carlo wall time %.1fs\n", elapsed);
  return ok && elapsed <= 120.0;
}

// --------------------------------------------------------- criterion 10 --

bool criterion10() {
  auto omega = make_graph_domain("plane", 1.0, {0.0}, 1);
  auto A = identity_field(1);
  auto zero = [](const Point&) { return 0.0; };
  auto g = [](const Point& p) {
    const double q = (p.X[0] - 1.0) * (p.X[0] - 1.0) + p.Y[0] * p.Y[0] +
                     (p.t + 0.5) * (p.t + 0.5);
    return std::exp(-q / 2.25);
  };
  ProductDomain probe;
  probe.U_X = {{0.5, 1.5}};
  probe.V_Y = {{-0.4, 0.4}};
  probe.T = {-0.8, -0.2};
  ExhaustionOptions opts;
  ExhaustionResult res = solve_exhaustion(
      omega, {{-1.0, 1.0}}, {-1.0, 0.0}, g, zero, A, {1.0, 2.0, 4.0, 8.0},
      probe, opts);
  std::printf("      sup differences:");
  for (std::size_t i = 1; i < res.steps.size(); ++i)
    std::printf(" %.3e", res.steps[i].sup_difference);
  std::printf("\n");
  for (std::size_t i = 2; i < res.steps.size(); ++i)
    if (!(res.steps[i].sup_difference < res.steps[i - 1].sup_difference))
      return false;
  const double data_scale = 1.0;  // sup |g| = 1 at the center
  return res.steps.back().sup_difference <= 1e-3 * data_scale;
}

// --------------------------------------------------------- criterion 11 --

bool criterion11() {
  const int n_paths = 100000, n_steps = 1024;
  const double dt = 1.0 / n_steps;
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(1, 1) * std::sqrt(2.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int p = 0; p < n_paths; ++p) {
    PhiloxRng rng(1111, static_cast<std::uint64_t>(p));
    PathState st(origin(1));
    Eigen::VectorXd xi(1);
    for (int k = 0; k < n_steps; ++k) {
      xi[0] = rng.gaussian();
      step(st, dt, S, xi, true);
    }
    sx += st.X[0];
    sy += st.Y[0];
    sxx += st.X[0] * st.X[0];
    sxy += st.X[0] * st.Y[0];
    syy += st.Y[0] * st.Y[0];
  }
  const double n = n_paths;
  const double mx = sx / n, my = sy / n;
  const double var_x = sxx / n - mx * mx;
  const double cov = sxy / n - mx * my;
  const double var_y = syy / n - my * my;
  const double se_vx = std::sqrt(2.0 / n) * 2.0;
  const double se_vy = std::sqrt(2.0 / n) * (2.0 / 3.0);
  const double se_c = std::sqrt((2.0 * 2.0 / 3.0 + 1.0) / n);
  std::printf("      var x %.5f (2), cov %.5f (1), var y %.5f (2/3)\n", var_x,
              cov, var_y);
  return std::fabs(var_x - 2.0) <= 3.0 * se_vx &&
         std::fabs(cov - 1.0) <= 3.0 * se_c &&
         std::fabs(var_y - 2.0 / 3.0) <= 3.0 * se_vy;
}

}  // namespace

int main() {
  report(1, "group law, dilations, quasi-distance (1000 cases, 1e-12)",
         criterion1());
  report(2, "boundary classification by the sign rule (exhaustive)",
         criterion2());
  report(3, "constant data reproduced to 1e-12 (direct and variational)",
         criterion3());
  const bool gates = criterion12();
  report(12, "kernel gates: mass 1e-6, semigroup 1e-4, residual order 2",
         gates);
  if (gates) {
    report(4, "prototype benchmark converges at order >= 1", criterion4());
  } else {
    report(4, "prototype benchmark skipped: kernel gates failed", false);
  }
  report(5, "direct and variational solutions agree to 1e-8 (5 problems)",
         criterion5());
  report(6, "functional: null minimum and quadratic growth", criterion6());
  report(7, "discrete maximum principle (20 random problems)", criterion7());
  report(8, "Poincare constants: 1/pi slab and kinetic sampling",
         criterion8());
  report(9, "Monte-Carlo cross-oracle within 3 standard errors",
         criterion9());
  report(10, "increasing domains: decreasing differences, 1e-3 tail",
         criterion10());
  report(11, "kinetic moments at 1e5 paths within 3 standard errors",
         criterion11());
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "kfp/assemble.hpp"
#include "kfp/coefficients.hpp"
#include "kfp/grid.hpp"
#include "kfp/report.hpp"

using namespace kfp;

namespace {

ProductDomain box1() {
  ProductDomain d;
  d.U_X = {{-1.0, 1.0}};
  d.V_Y = {{-1.0, 1.0}};
  d.T = {0.0, 1.0};
  return d;
}

ProblemData constant_problem(double value, EllipticMatrixField A) {
  ProblemData prob;
  prob.A = std::move(A);
  prob.g = [value](const Point&) { return value; };
  prob.gstar = [](const Point&) { return 0.0; };
  return prob;
}

double max_abs_diff(const DiscreteField& a, const DiscreteField& b) {
  return (a.values - b.values).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("axis constructors and quadrature weights") {
  CellAxis cx = CellAxis::uniform(-1.0, 1.0, 4);
  REQUIRE(cx.n() == 4);
  CHECK(cx.faces.front() == doctest::Approx(-1.0));
  CHECK(cx.faces.back() == doctest::Approx(1.0));
  CHECK(cx.centers[1] == doctest::Approx(-0.25));
  CHECK(cx.widths[2] == doctest::Approx(0.5));

  NodeAxis ny = NodeAxis::uniform(0.0, 2.0, 5);
  REQUIRE(ny.n() == 5);
  double wsum = 0.0;
  for (double w : ny.weights) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ny.weights.front() == doctest::Approx(0.25));
  CHECK(ny.weights[2] == doctest::Approx(0.5));

  CHECK_THROWS_AS(CellAxis::from_faces({0.0, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(NodeAxis::from_nodes({1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("build_grid validates counts and domain") {
  CHECK_THROWS_AS(build_grid(box1(), {2}, {4}, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(box1(), {4}, {2}, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(box1(), {4}, {4}, 2), std::invalid_argument);
  ProductDomain bad = box1();
  bad.T = {1.0, 0.0};
  CHECK_THROWS_AS(build_grid(bad, {4}, {4}, 4), std::invalid_argument);
}

TEST_CASE("node classification follows the sign rule (exhaustive, m=1)") {
  // Even nx so no cell center sits at x = 0.
  Grid g = build_grid(box1(), {6}, {5}, 4);
  const std::size_t last_y = g.y[0].n() - 1, last_t = g.t.n() - 1;
  for (std::size_t ti = 0; ti < g.t.n(); ++ti) {
    for (std::size_t yi = 0; yi < g.y[0].n(); ++yi) {
      for (std::size_t xi = 0; xi < g.x[0].n(); ++xi) {
        const double xc = g.x[0].centers[xi];
        NodeClass expect;
        if (ti == 0 || (yi == 0 && xc < 0.0) || (yi == last_y && xc > 0.0))
          expect = NodeClass::Kolmogorov;
        else if (ti == last_t || yi == 0 || yi == last_y)
          expect = NodeClass::Free;
        else
          expect = NodeClass::Interior;
        CHECK(g.cls[g.node(xi, yi, ti)] == expect);
      }
    }
  }
  // Counts: initial layer fully Kolmogorov; final layer (interior in y)
  // fully free.
  std::size_t k_init = 0;
  for (std::size_t yi = 0; yi < g.ny_total(); ++yi)
    for (std::size_t xi = 0; xi < g.nx_total(); ++xi)
      if (g.cls[g.node(xi, yi, 0)] == NodeClass::Kolmogorov) ++k_init;
  CHECK(k_init == g.nxy());
}

TEST_CASE("graph cut deactivates cells below psi") {
  auto omega = make_graph_domain("plane", 1.0, {0.0}, 1);
  Grid g = build_grid_axes({CellAxis::uniform(-1.0, 1.0, 8)},
                           {NodeAxis::uniform(-1.0, 1.0, 5)},
                           NodeAxis::uniform(0.0, 1.0, 4), omega);
  // psi = 0: the 4 cells with negative centers are cut.
  std::size_t active = 0;
  for (std::size_t xi = 0; xi < 8; ++xi) active += g.x_active(xi) ? 1 : 0;
  CHECK(active == 4);
  CHECK(g.count(NodeClass::Inactive) == 4 * g.ny_total() * g.t.n());
  // Inactive nodes are skipped by sample_field.
  auto one = sample_field(g, [](const Point&) { return 1.0; });
  CHECK(one[g.node(0, 0, 0)] == 0.0);
  CHECK(one[g.node(7, 0, 0)] == 1.0);
}

TEST_CASE("x_gradient_stencil is exact on linear functions") {
  Grid g = build_grid(box1(), {7}, {4}, 4);
  std::vector<std::pair<std::size_t, double>> st;
  for (std::size_t k = 0; k < 7; ++k) {
    x_gradient_stencil(g, 0, {k}, st);
    double deriv = 0.0;
    for (auto& [xi, c] : st) deriv += c * (3.0 * g.x[0].centers[xi] + 2.0);
    CHECK(deriv == doctest::Approx(3.0).epsilon(1e-12));
  }
}

TEST_CASE("interpolate reproduces multilinear functions") {
  Grid g = build_grid(box1(), {6}, {5}, 5);
  auto f = [](const Point& p) {
    return 1.0 + 2.0 * p.X[0] - 0.5 * p.Y[0] + 0.25 * p.t +
           0.75 * p.X[0] * p.Y[0];
  };
  DiscreteField u = sample_field(g, f);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-0.8, 0.8);
  std::uniform_real_distribution<double> ut(0.05, 0.95);
  for (int k = 0; k < 200; ++k) {
    Point p({ud(rng)}, {ud(rng)}, ut(rng));
    // Exact once inside the cell-center hull in x.
    if (std::fabs(p.X[0]) > g.x[0].centers.back()) continue;
    CHECK(interpolate(u, p) == doctest::Approx(f(p)).epsilon(1e-12));
  }
}

TEST_CASE("constant data is reproduced exactly") {
  for (const char* fam : {"constant", "checkerboard"}) {
    auto A = make_coefficient_field(
        fam, 4.0,
        fam == std::string("checkerboard") ? std::vector<double>{4.0, 0.25}
                                           : std::vector<double>{},
        1);
    Grid g = build_grid(box1(), {8}, {6}, 5);
    ProblemData prob = constant_problem(2.5, A);
    SolveReport rep;
    DiscreteField u = solve_direct(g, prob, &rep);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(std::fabs(u[i] - 2.5) <= 1e-12 * 2.5);
    CHECK(rep.unknowns > 0);
    DiscreteField ud = solve_monolithic_dense(g, prob);
    CHECK(max_abs_diff(u, ud) <= 1e-10);
  }
}

TEST_CASE("marching and monolithic dense solves agree") {
  Grid g = build_grid(box1(), {6}, {5}, 4);
  ProblemData prob;
  prob.A = make_coefficient_field("checkerboard", 4.0, {4.0, 0.25}, 1);
  prob.g = [](const Point& p) {
    return std::sin(1.3 * p.X[0]) + 0.5 * std::cos(0.7 * p.Y[0]) + 0.2 * p.t;
  };
  prob.gstar = [](const Point& p) { return 0.3 * p.X[0] - 0.1 * p.Y[0]; };
  DiscreteField um = solve_direct(g, prob);
  DiscreteField ud = solve_monolithic_dense(g, prob);
  CHECK(max_abs_diff(um, ud) <= 1e-9);
  // Time-dependent coefficients disable factorization reuse but must give
  // the same answer against the dense oracle.
  ProblemData probt = prob;
  probt.A = make_coefficient_field("periodic", 4.0, {}, 1);
  CHECK(max_abs_diff(solve_direct(g, probt), solve_monolithic_dense(g, probt)) <=
        1e-9);
}

TEST_CASE("discrete maximum principle on random homogeneous problems") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const double a = 1.0 + std::fabs(ud(rng)) * 3.0;
    const double c0 = ud(rng), c1 = ud(rng), c2 = ud(rng);
    ProblemData prob;
    prob.A = make_coefficient_field("constant", 10.0, {a}, 1);
    prob.g = [=](const Point& p) {
      return c0 * std::sin(2.0 * p.X[0]) + c1 * std::cos(1.5 * p.Y[0]) +
             c2 * std::sin(p.t + p.X[0]);
    };
    prob.gstar = [](const Point&) { return 0.0; };
    Grid g = build_grid(box1(), {8}, {7}, 6);
    DiscreteField u = solve_direct(g, prob);
    const double bound = std::fabs(c0) + std::fabs(c1) + std::fabs(c2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(u[i] <= bound + 1e-10);
      CHECK(u[i] >= -bound - 1e-10);
    }
  }
}

TEST_CASE("weak residual is small at the discrete solution") {
  Grid g = build_grid(box1(), {8}, {6}, 5);
  ProblemData prob;
  prob.A = make_coefficient_field("constant", 4.0, {2.0}, 1);
  prob.g = [](const Point& p) { return std::sin(p.X[0]) + 0.3 * p.Y[0]; };
  prob.gstar = [](const Point& p) { return 0.2 * p.X[0]; };
  DiscreteField u = solve_direct(g, prob);
  const double r_solution = weak_residual(g, prob, u);
  CHECK(r_solution <= 1e-8);
  // A perturbed field has a visibly larger residual.
  DiscreteField v = u;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.cls[i] == NodeClass::Interior) v[i] += 0.01;
  CHECK(weak_residual(g, prob, v) > 100.0 * std::max(r_solution, 1e-12));
}

TEST_CASE("diffusion block is symmetric") {
  Grid g = build_grid(box1(), {9}, {4}, 4);
  auto A = make_coefficient_field("checkerboard", 4.0, {4.0, 0.25}, 1);
  Eigen::SparseMatrix<double> S =
      diffusion_block_weighted(g, A, g.point(0, 0, 1));
  Eigen::SparseMatrix<double> D = Eigen::SparseMatrix<double>(S.transpose()) - S;
  const bool symmetric =
      D.coeffs().size() == 0 || D.coeffs().cwiseAbs().maxCoeff() <= 1e-13;
  CHECK(symmetric);
}

TEST_CASE("field reports round-trip through binary and CSV") {
  Grid g = build_grid(box1(), {5}, {4}, 4);
  DiscreteField u = sample_field(
      g, [](const Point& p) { return p.X[0] * 1.0e-3 + p.Y[0] - 7.0 * p.t; });
  const std::string bin = "/tmp/kfp_test_field.bin";
  write_field_binary(g, u, bin);
  DiscreteField v = read_field_binary(g, bin);
  CHECK(max_abs_diff(u, v) == 0.0);
  Grid g2 = build_grid(box1(), {6}, {4}, 4);
  CHECK_THROWS_AS(read_field_binary(g2, bin), std::runtime_error);
  std::remove(bin.c_str());

  const std::string csv = "/tmp/kfp_test_field.csv";
  write_field_csv(g, u, csv);
  std::ifstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header == "x0,y0,t,value");
  std::size_t lines = 0;
  for (std::string line; std::getline(is, line);) ++lines;
  CHECK(lines == g.size());
  std::remove(csv.c_str());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kfp/exhaustion.hpp"

using namespace kfp;

namespace {

PointFn gaussian_bump(double width) {
  return [width](const Point& p) {
    double q = p.t * p.t;
    for (std::size_t i = 0; i < p.m(); ++i)
      q += p.X[i] * p.X[i] + p.Y[i] * p.Y[i];
    return std::exp(-q / (width * width));
  };
}

}  // namespace

TEST_CASE("cutoff profile: plateau, ramp midpoint, support") {
  auto omega = make_graph_domain("plane", 1.0, {0.0}, 1);
  const double R = 2.0;
  // rho(X) = |x|/(4M) for m = 1 on the plane.
  auto at = [&](double x) {
    return cutoff_value(omega, Point({x}, {0.0}, 0.0), R);
  };
  CHECK(at(0.5) == doctest::Approx(1.0));
  CHECK(at(4.0 * R / 2.0) == doctest::Approx(1.0));          // rho = R/2
  CHECK(at(4.0 * 5.0 * R / 8.0) == doctest::Approx(0.5));    // rho = 5R/8
  CHECK(at(4.0 * 3.0 * R / 4.0) == doctest::Approx(0.0));    // rho = 3R/4
  CHECK(at(10.0 * R) == doctest::Approx(0.0));
  // Monotone ramp.
  double prev = 1.0;
  for (double x = 4.0 * R / 2.0; x <= 4.0 * 3.0 * R / 4.0; x += 0.05) {
    const double v = at(x);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  // cutoff_data multiplies the raw data pointwise.
  auto g = [](const Point& p) { return 2.0 + p.X[0]; };
  auto gc = cutoff_data(omega, g, R);
  Point mid({4.0 * 5.0 * R / 8.0}, {0.0}, 0.0);
  CHECK(gc(mid) == doctest::Approx(0.5 * g(mid)));
}

TEST_CASE("stretched points: core uniform, ends snapped, strictly increasing") {
  auto pts = stretched_points(-10.0, 10.0, -1.0, 1.0, 8, 1.35);
  REQUIRE(pts.size() >= 10);
  CHECK(pts.front() == doctest::Approx(-10.0));
  CHECK(pts.back() == doctest::Approx(10.0));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) CHECK(pts[i] < pts[i + 1]);
  // The core keeps a uniform spacing of 2/8.
  std::size_t inside = 0;
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i] >= -1.0 - 1e-12 && pts[i + 1] <= 1.0 + 1e-12) {
      if (inside == 0) h = pts[i + 1] - pts[i];
      CHECK(pts[i + 1] - pts[i] == doctest::Approx(h).epsilon(1e-10));
      ++inside;
    }
  }
  CHECK(inside == 8);
  // Degenerate requests are rejected.
  CHECK_THROWS_AS(stretched_points(0.0, 1.0, 0.5, 0.4, 4, 1.35),
                  std::invalid_argument);
  CHECK_THROWS_AS(stretched_points(0.0, 1.0, 0.2, 0.8, 4, 0.9),
                  std::invalid_argument);
}

TEST_CASE("zero data on the half-space gives the zero limit") {
  auto omega = make_graph_domain("plane", 1.0, {0.0}, 1);
  auto A = make_coefficient_field("constant", 4.0, {1.0}, 1);
  auto zero = [](const Point&) { return 0.0; };
  ProductDomain probe;
  probe.U_X = {{0.5, 1.5}};
  probe.V_Y = {{-0.4, 0.4}};
  probe.T = {-0.8, -0.2};
  ExhaustionOptions opts;
  opts.core_cells = 6;
  opts.core_nodes = 5;
  opts.core_tnodes = 5;
  ExhaustionResult res =
      solve_exhaustion(omega, {{-1.0, 1.0}}, {-1.0, 0.0}, zero, zero, A,
                       {1.0, 2.0}, probe, opts);
  REQUIRE(res.steps.size() == 2);
  for (const auto& st : res.steps) {
    CHECK(st.sup_norm <= 1e-12);
    CHECK(st.data_sup <= 1e-12);
  }
  CHECK(res.steps[1].sup_difference <= 1e-12);
  CHECK(res.max_principle_ok);
}

TEST_CASE("increasing domains stabilize the probe restriction") {
  auto omega = make_graph_domain("plane", 1.0, {0.0}, 1);
  auto A = make_coefficient_field("constant", 4.0, {1.0}, 1);
  auto zero = [](const Point&) { return 0.0; };
  ProductDomain probe;
  probe.U_X = {{0.5, 1.5}};
  probe.V_Y = {{-0.4, 0.4}};
  probe.T = {-0.8, -0.2};
  ExhaustionOptions opts;
  opts.core_cells = 6;
  opts.core_nodes = 5;
  opts.core_tnodes = 5;
  ExhaustionResult res =
      solve_exhaustion(omega, {{-1.0, 1.0}}, {-1.0, 0.0}, gaussian_bump(2.0),
                       zero, A, {1.0, 2.0, 4.0}, probe, opts);
  REQUIRE(res.steps.size() == 3);
  CHECK(res.steps[0].sup_norm > 0.0);
  CHECK(res.steps[1].sup_difference > 0.0);
  CHECK(res.steps[2].sup_difference <= res.steps[1].sup_difference);
  CHECK(res.differences_monotone);
  CHECK(res.max_principle_ok);
  // The probe grid is shared, so fields are comparable entry by entry.
  CHECK(res.steps[0].probe_values.values.size() ==
        res.steps[2].probe_values.values.size());
}

TEST_CASE("invalid requests are rejected") {
  auto omega = make_graph_domain("plane", 1.0, {0.0}, 1);
  auto A = make_coefficient_field("constant", 4.0, {1.0}, 1);
  auto zero = [](const Point&) { return 0.0; };
  ProductDomain probe;
  probe.U_X = {{0.5, 1.5}};
  probe.V_Y = {{-0.4, 0.4}};
  probe.T = {-0.8, -0.2};
  // Non-increasing R list.
  CHECK_THROWS_AS(solve_exhaustion(omega, {{-1.0, 1.0}}, {-1.0, 0.0}, zero,
                                   zero, A, {2.0, 1.0}, probe),
                  std::invalid_argument);
  // Probe outside the smallest domain.
  ProductDomain far = probe;
  far.U_X[0] = {30.0, 31.0};
  CHECK_THROWS_AS(solve_exhaustion(omega, {{-1.0, 1.0}}, {-1.0, 0.0}, zero,
                                   zero, A, {1.0, 2.0}, far),
                  std::invalid_argument);
  // Probe below the graph.
  ProductDomain low = probe;
  low.U_X[0] = {-1.5, -0.5};
  CHECK_THROWS_AS(solve_exhaustion(omega, {{-1.0, 1.0}}, {-1.0, 0.0}, zero,
                                   zero, A, {1.0, 2.0}, low),
                  std::invalid_argument);
}

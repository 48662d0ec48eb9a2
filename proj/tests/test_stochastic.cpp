#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kfp/stochastic.hpp"

using namespace kfp;

namespace {

ProductDomain box(double xr, double yr, double t0, double t1) {
  ProductDomain d;
  d.U_X = {{-xr, xr}};
  d.V_Y = {{-yr, yr}};
  d.T = {t0, t1};
  return d;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  // Zero key, zero counter: the published reference block.
  PhiloxRng rng(0, 0);
  CHECK(rng.next_u32() == 0x6627e8d5u);
  CHECK(rng.next_u32() == 0xe169c58du);
  CHECK(rng.next_u32() == 0xbc57ac4cu);
  CHECK(rng.next_u32() == 0x9b00dbd8u);

  // Seeded stream: two consecutive blocks, counter increments in word 0.
  PhiloxRng s(0xdeadbeef12345678ull, 0x42ull);
  const std::uint32_t expect[8] = {4231662323u, 2104338220u, 1849762303u,
                                   1113266144u, 494481690u,  2762678757u,
                                   3196891728u, 1795097435u};
  for (std::uint32_t e : expect) CHECK(s.next_u32() == e);
}

TEST_CASE("streams are deterministic and decorrelated") {
  PhiloxRng a(7, 3), b(7, 3), c(7, 4);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint32_t va = a.next_u32();
    all_equal = all_equal && (va == b.next_u32());
    any_diff = any_diff || (va != c.next_u32());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform lies in (0,1) and is unbiased; gaussian has unit scale") {
  PhiloxRng rng(12, 0);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 20000.0 == doctest::Approx(0.5).epsilon(0.02));
  double s2 = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double z = rng.gaussian();
    s2 += z * z;
  }
  CHECK(s2 / 20000.0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("canonical patch layout") {
  CHECK(patch_count(1) == 5);
  CHECK(patch_count(2) == 9);
  CHECK(x_patch(0, false) == 0);
  CHECK(x_patch(1, true) == 3);
  CHECK(y_patch(2, 0, false) == 4);
  CHECK(y_patch(2, 1, true) == 7);
  CHECK(time_patch(2) == 8);
}

TEST_CASE("sqrt_2A factors constant fields; varying fields are rejected") {
  auto A = make_coefficient_field("constant", 4.0, {2.0, 0.5, 0.5, 1.0}, 2);
  Eigen::MatrixXd S = sqrt_2A(A, origin(2));
  Eigen::MatrixXd back = S * S.transpose();
  CHECK((back - 2.0 * A(origin(2))).cwiseAbs().maxCoeff() <= 1e-12);

  auto C = make_coefficient_field("checkerboard", 4.0, {4.0, 0.25}, 1);
  ProductDomain skew = box(1, 1, 0, 1);
  skew.U_X[0] = {-1.0, 0.5};  // box center sits on the other checker tile
  Point start({0.3}, {0.0}, 1.0);
  CHECK_THROWS_WITH_AS(
      estimate_solution(skew, C, [](const Point&) { return 1.0; }, start),
      "stochastic estimator requires constant coefficients",
      std::invalid_argument);
  auto P = make_coefficient_field("periodic", 4.0, {}, 1);
  CHECK_THROWS_AS(
      estimate_solution(box(1, 1, 0, 1), P, [](const Point&) { return 1.0; },
                        Point({0.0}, {0.0}, 1.0)),
      std::invalid_argument);
}

TEST_CASE("Euler step: exact transport with zero noise") {
  Point start({0.7}, {-0.2}, 1.0);
  PathState st(start);
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(1, 1) * std::sqrt(2.0);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  step(st, 0.25, S, zero);
  CHECK(st.X[0] == doctest::Approx(0.7));
  CHECK(st.Y[0] == doctest::Approx(-0.2 + 0.7 * 0.25).epsilon(1e-15));
  CHECK(st.s == doctest::Approx(0.25));
  // Trapezoid rule averages old and new X.
  Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  PathState tr(start);
  step(tr, 0.25, S, one, true);
  const double xnew = 0.7 + std::sqrt(2.0 * 0.25);
  CHECK(tr.X[0] == doctest::Approx(xnew).epsilon(1e-15));
  CHECK(tr.Y[0] ==
        doctest::Approx(-0.2 + 0.5 * (0.7 + xnew) * 0.25).epsilon(1e-15));
}

TEST_CASE("free-space moments of the kinetic pair") {
  // Simulate to s = 1 with no boundaries: Var X = 2s, Cov(X,Y) = s^2,
  // Var Y = 2 s^3 / 3 (trapezoid quadrature keeps the Y bias negligible).
  const int n_paths = 20000, n_steps = 512;
  const double dt = 1.0 / n_steps;
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(1, 1) * std::sqrt(2.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int p = 0; p < n_paths; ++p) {
    PhiloxRng rng(2026, static_cast<std::uint64_t>(p));
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
  // 4-sigma bands: SE(var) ~ sqrt(2/n) var, SE(cov) ~ sqrt((vx vy + c^2)/n).
  CHECK(std::fabs(var_x - 2.0) <= 4.0 * std::sqrt(2.0 / n) * 2.0);
  CHECK(std::fabs(var_y - 2.0 / 3.0) <= 4.0 * std::sqrt(2.0 / n) * (2.0 / 3.0));
  CHECK(std::fabs(cov - 1.0) <=
        4.0 * std::sqrt((2.0 * 2.0 / 3.0 + 1.0) / n));
}

TEST_CASE("constant payoff is estimated exactly") {
  auto A = make_coefficient_field("constant", 4.0, {1.0}, 1);
  Point start({0.0}, {0.0}, 0.5);
  McOptions opts;
  opts.paths = 500;
  opts.seed = 3;
  McEstimate est = estimate_solution(box(2, 2, 0, 1), A,
                                     [](const Point&) { return 1.0; }, start,
                                     opts);
  CHECK(est.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est.std_error <= 1e-12);
  CHECK(est.lost_fraction == 0.0);
  CHECK(est.paths == 500);
}

TEST_CASE("tiny horizon exits through the initial-time face") {
  auto A = make_coefficient_field("constant", 4.0, {1.0}, 1);
  Point start({0.3}, {-0.1}, 1e-7);
  McOptions opts;
  opts.paths = 400;
  opts.seed = 5;
  auto phi = [](const Point& p) { return p.X[0] + 2.0 * p.Y[0] + 5.0 * p.t; };
  McEstimate est =
      estimate_solution(box(3, 3, 0, 1), A, phi, start, opts);
  CHECK(est.mean == doctest::Approx(0.3 - 0.2).epsilon(1e-2));
  MeasureEstimate mu =
      estimate_parabolic_measure(box(3, 3, 0, 1), A, start, opts);
  CHECK(mu.masses[static_cast<std::size_t>(time_patch(1))] ==
        doctest::Approx(1.0));
}

TEST_CASE("parabolic measure masses are a probability vector") {
  auto A = make_coefficient_field("constant", 4.0, {1.5}, 1);
  Point start({0.0}, {0.0}, 0.8);
  McOptions opts;
  opts.paths = 4000;
  opts.seed = 11;
  opts.dt = 1.0 / 512.0;
  MeasureEstimate mu =
      estimate_parabolic_measure(box(1, 0.5, 0, 1), A, start, opts);
  REQUIRE(mu.masses.size() == patch_count(1));
  double total = mu.lost_fraction;
  for (double w : mu.masses) {
    CHECK(w >= 0.0);
    total += w;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // Symmetric start: lateral X faces carry equal mass up to noise, and the
  // inflow Y faces likewise.
  CHECK(std::fabs(mu.masses[0] - mu.masses[1]) <= 0.05);
  CHECK(std::fabs(mu.masses[2] - mu.masses[3]) <= 0.05);
}

TEST_CASE("antithetic pairing leaves the estimator consistent") {
  auto A = make_coefficient_field("constant", 4.0, {1.0}, 1);
  Point start({0.0}, {0.0}, 0.5);
  auto phi = [](const Point& p) { return std::sin(p.X[0]) + p.Y[0] * p.Y[0]; };
  McOptions plain;
  plain.paths = 8000;
  plain.seed = 21;
  plain.dt = 1.0 / 256.0;
  McOptions anti = plain;
  anti.antithetic = true;
  McEstimate e1 = estimate_solution(box(2, 2, 0, 1), A, phi, start, plain);
  McEstimate e2 = estimate_solution(box(2, 2, 0, 1), A, phi, start, anti);
  CHECK(std::fabs(e1.mean - e2.mean) <=
        4.0 * std::hypot(e1.std_error, e2.std_error));
  CHECK(e2.std_error > 0.0);
}

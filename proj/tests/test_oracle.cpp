#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "mpoc/oracle.hpp"

using namespace mpoc;

TEST_CASE("separable quadratic bump") {
  const SepQuadratic q = SepQuadratic::bump(10.0, {1.0, -2.0});
  CHECK(q.value({1.0, -2.0}) == doctest::Approx(0.0));
  CHECK(q.value({2.0, -2.0}) == doctest::Approx(-10.0));
  CHECK(q.value({0.0, 0.0}) == doctest::Approx(-10.0 * (1.0 + 4.0)));
}

TEST_CASE("Riccati flow short-horizon expansion") {
  // a' = 2a^2 - 1, beta' = 2 a beta, J' = beta^2
  const double a0 = -1.0, tau = 1e-3;
  const RiccatiFlow f = RiccatiFlow::over(a0, tau);
  CHECK(f.a == doctest::Approx(a0 + tau * (2 * a0 * a0 - 1)).epsilon(1e-6));
  CHECK(f.beta == doctest::Approx(1.0 + tau * 2 * a0).epsilon(1e-5));
  CHECK(f.J == doctest::Approx(tau).epsilon(1e-4));
}

TEST_CASE("Riccati flow approaches the stable fixed point") {
  const RiccatiFlow f = RiccatiFlow::over(-10.0, 5.0);
  CHECK(f.a == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("Riccati flow semigroup property") {
  const SepQuadratic q = SepQuadratic::bump(10.0, {2.0});
  const RiccatiFlow whole = RiccatiFlow::over(-10.0, 0.8);
  const RiccatiFlow first = RiccatiFlow::over(-10.0, 0.3);
  const SepQuadratic mid = first.apply(q);
  const RiccatiFlow second = RiccatiFlow::over(mid.a, 0.5);
  const SepQuadratic two_step = second.apply(mid);
  const SepQuadratic one_step = whole.apply(q);
  CHECK(two_step.a == doctest::Approx(one_step.a).epsilon(1e-8));
  CHECK(two_step.b[0] == doctest::Approx(one_step.b[0]).epsilon(1e-8));
  CHECK(two_step.e[0] == doctest::Approx(one_step.e[0]).epsilon(1e-7));
}

TEST_CASE("flow blow-up guard") {
  CHECK_THROWS(RiccatiFlow::over(0.8, 1.0));
  CHECK_THROWS(RiccatiFlow::over(-10.0, -1.0));
}

TEST_CASE("quadratic box maximum") {
  SepQuadratic q;
  q.a = -2.0;
  q.b = {4.0};  // vertex at 1
  q.e = {0.5};
  const Box X = Box::cube(1, -5.0, 5.0);
  CHECK(quad_max_over(q, X) == doctest::Approx(-2.0 + 4.0 + 0.5));
  CHECK(quad_argmax_over(q, X) == Vec{1.0});
  const Box narrow = Box::cube(1, -5.0, 0.5);
  CHECK(quad_argmax_over(q, narrow) == Vec{0.5});
  SepQuadratic bad;
  bad.a = 1.0;
  bad.b = {0.0};
  bad.e = {0.0};
  CHECK_THROWS(quad_max_over(bad, X));
}

TEST_CASE("oracle end conditions") {
  LQInstance lq(2);
  const RiccatiOracle oracle(lq);
  const ControlProblem prob = lq.to_problem();
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> xs(-5.0, 5.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec x{xs(rng), xs(rng)};
    CHECK(oracle.value(Direction::Forward, 0.0, x) == doctest::Approx(prob.phi0(x)));
    CHECK(oracle.value(Direction::Backward, 5.0, x) == doctest::Approx(prob.phiT(x)));
  }
}

TEST_CASE("optimal value is invariant in t") {
  for (int d : {1, 2, 3}) {
    LQInstance lq(d);
    const RiccatiOracle oracle(lq);
    const double v0 = oracle.optimal_value(0.0);
    for (double t = 0.5; t <= 5.0 + 1e-9; t += 0.5)
      CHECK(std::abs(oracle.optimal_value(t) - v0) < 1e-6);
  }
}

TEST_CASE("trajectory matches the dense argmax") {
  LQInstance lq(1);
  const RiccatiOracle oracle(lq);
  for (double t : {0.0, 1.0, 2.5, 4.0, 5.0}) {
    const SepQuadratic qf = oracle.quadratic(Direction::Forward, t);
    const SepQuadratic qb = oracle.quadratic(Direction::Backward, t);
    double best = -1e300, at = 0.0;
    for (double x = -5.0; x <= 5.0; x += 1e-4) {
      const double v = qf.value({x}) + qb.value({x});
      if (v > best) {
        best = v;
        at = x;
      }
    }
    CHECK(std::abs(oracle.trajectory(t)[0] - at) < 1e-3);
    CHECK(oracle.optimal_value(t) == doctest::Approx(best).epsilon(1e-7));
  }
}

TEST_CASE("trajectory endpoints drift from the cost anchors") {
  // end costs are soft, so x*(0) lies between x0 and xT, close to x0
  LQInstance lq(1);
  const RiccatiOracle oracle(lq);
  const double s = oracle.trajectory(0.0)[0];
  const double e = oracle.trajectory(5.0)[0];
  CHECK(s > -3.0);
  CHECK(s < 0.0);
  CHECK(e < 3.0);
  CHECK(e > 0.0);
}

TEST_CASE("time outside the horizon throws") {
  LQInstance lq(1);
  const RiccatiOracle oracle(lq);
  CHECK_THROWS(oracle.value(Direction::Forward, -0.5, {0.0}));
  CHECK_THROWS(oracle.value(Direction::Forward, 5.5, {0.0}));
}

TEST_CASE("semi-Lagrangian baseline approximates the oracle") {
  LQInstance lq(1);
  const ControlProblem prob = lq.to_problem();
  const RiccatiOracle oracle(lq);

  SLConfig coarse;
  coarse.space_step = 0.5;
  coarse.time_step = 0.1;
  coarse.controls_per_dim = 41;
  SLConfig fine = coarse;
  fine.space_step = 0.25;
  fine.time_step = 0.05;

  auto max_err = [&](const SLGrid& sl) {
    double err = 0.0;
    const long k0 = 0;  // compare at t = 0 on the interior
    for (double x = -3.0; x <= 3.0 + 1e-9; x += 0.25)
      err = std::max(err, std::abs(sl.value_at(k0, {x}) -
                                   oracle.value(Direction::Backward, 0.0, {x})));
    return err;
  };
  const double ec = max_err(sl_solve(prob, Direction::Backward, coarse));
  const double ef = max_err(sl_solve(prob, Direction::Backward, fine));
  CHECK(ec < 3.0);
  CHECK(ef < ec + 1e-9);  // refinement does not make it worse
  CHECK(ef < 1.5);
}

TEST_CASE("semi-Lagrangian value_at interpolates the table") {
  LQInstance lq(1);
  const ControlProblem prob = lq.to_problem();
  SLConfig cfg;
  cfg.space_step = 1.0;
  cfg.time_step = 0.5;
  cfg.controls_per_dim = 11;
  const SLGrid sl = sl_solve(prob, Direction::Backward, cfg);
  CHECK(sl.num_steps() == 10);
  // at a node, equals the table; between nodes, between the node values
  const long g = sl.grid.nearest({0.0});
  CHECK(sl.value_at(3, sl.grid.point(g)) == doctest::Approx(sl.values[3][g]));
  const double v0 = sl.value_at(3, {0.0}), v1 = sl.value_at(3, {1.0});
  const double mid = sl.value_at(3, {0.5});
  CHECK(mid >= std::min(v0, v1) - 1e-12);
  CHECK(mid <= std::max(v0, v1) + 1e-12);
  CHECK_THROWS(sl_solve(make_problem("lq", {{"d", 4.0}}), Direction::Backward, cfg));
}

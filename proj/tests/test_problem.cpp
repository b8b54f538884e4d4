#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "mpoc/problem.hpp"

using namespace mpoc;

namespace {

double closed_form_H(const Vec& x, const Vec& p) {
  // per coordinate: max_{|u|<=20} (p u - 1/2 u^2) - x^2
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double u = std::clamp(p[k], -20.0, 20.0);
    s += p[k] * u - 0.5 * u * u - x[k] * x[k];
  }
  return s;
}

}  // namespace

TEST_CASE("LQ instance data") {
  LQInstance lq(3);
  CHECK(lq.x0 == Vec{-3.0, -3.0, -3.0});
  CHECK(lq.xT == Vec{3.0, 3.0, 3.0});
  const ControlProblem prob = lq.to_problem();
  CHECK(prob.d == 3);
  CHECK(prob.m == 3);
  CHECK(prob.T == 5.0);
  CHECK(prob.X.lo[0] == -5.0);
  CHECK(prob.phi0(lq.x0) == 0.0);
  CHECK(prob.phiT(lq.xT) == 0.0);
  CHECK(prob.phi0({-1.0, -3.0, -3.0}) == doctest::Approx(-2.0));
  CHECK(prob.phiT({3.0, 3.0, 1.0}) == doctest::Approx(-4.0));
  CHECK(prob.ell({1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}) == doctest::Approx(-3.0));
  CHECK(prob.f({0.0, 0.0, 0.0}, {1.0, 2.0, 3.0}) == Vec{1.0, 2.0, 3.0});
  CHECK(prob.lq.has_value());
  CHECK(prob.derivatives.has_value());
  CHECK(prob.analytic_hamiltonian.has_value());
}

TEST_CASE("Hamiltonian closed form, interior and clamped") {
  LQInstance lq(2);
  const ControlProblem prob = lq.to_problem();
  CHECK(hamiltonian(prob, {1.0, 2.0}, {3.0, -4.0}) ==
        doctest::Approx(0.5 * (9.0 + 16.0) - (1.0 + 4.0)));
  // |p| beyond the control box: the clamped branch
  const Vec x{0.5, -0.5}, p{30.0, -25.0};
  CHECK(hamiltonian(prob, x, p) == doctest::Approx(closed_form_H(x, p)));
}

TEST_CASE("Hamiltonian against the control-grid oracle") {
  LQInstance lq(1);
  const ControlProblem prob = lq.to_problem();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> xs(-5.0, 5.0), ps(-30.0, 30.0);
  for (int rep = 0; rep < 25; ++rep) {
    const Vec x{xs(rng)}, p{ps(rng)};
    const double grid = hamiltonian_grid(prob, x, p, 4001);
    CHECK(std::abs(hamiltonian(prob, x, p) - grid) < 1e-3);
    CHECK(hamiltonian(prob, x, p) >= grid - 1e-12);
  }
}

TEST_CASE("numeric Hamiltonian path matches the analytic one") {
  LQInstance lq(1);
  ControlProblem prob = lq.to_problem();
  ControlProblem numeric = prob;
  numeric.analytic_hamiltonian.reset();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> xs(-5.0, 5.0), ps(-15.0, 15.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec x{xs(rng)}, p{ps(rng)};
    CHECK(std::abs(hamiltonian(numeric, x, p) - hamiltonian(prob, x, p)) < 1e-5);
  }
}

TEST_CASE("Hamiltonian is convex in p") {
  LQInstance lq(2);
  const ControlProblem prob = lq.to_problem();
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> ps(-30.0, 30.0);
  const Vec x{1.0, -2.0};
  for (int rep = 0; rep < 100; ++rep) {
    const Vec p{ps(rng), ps(rng)}, q{ps(rng), ps(rng)};
    const Vec mid{0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])};
    CHECK(hamiltonian(prob, x, mid) <=
          0.5 * (hamiltonian(prob, x, p) + hamiltonian(prob, x, q)) + 1e-9);
  }
}

TEST_CASE("problem registry") {
  const ControlProblem p1 = make_problem("lq", {{"d", 2.0}});
  CHECK(p1.d == 2);
  const ControlProblem p2 = make_problem("lq", {});
  CHECK(p2.d >= 1);
  CHECK_THROWS(make_problem("unknown", {}));
  CHECK_THROWS(make_problem("lq", {{"d", 0.0}}));
}

TEST_CASE("analytic derivatives match finite differences") {
  LQInstance lq(2);
  const ControlProblem prob = lq.to_problem();
  const Vec x{0.7, -1.2}, u{2.0, -3.0};
  const auto fx = prob.derivatives->f_x(x, u);
  const auto fu = prob.derivatives->f_u(x, u);
  const auto lx = prob.derivatives->ell_x(x, u);
  const auto lu = prob.derivatives->ell_u(x, u);
  const double h = 1e-6;
  for (int k = 0; k < 2; ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    CHECK(lx[k] ==
          doctest::Approx((prob.ell(xp, u) - prob.ell(xm, u)) / (2 * h)).epsilon(1e-5));
    Vec up = u, um = u;
    up[k] += h;
    um[k] -= h;
    CHECK(lu[k] ==
          doctest::Approx((prob.ell(x, up) - prob.ell(x, um)) / (2 * h)).epsilon(1e-5));
    for (int r = 0; r < 2; ++r) {
      CHECK(fx[r * 2 + k] ==
            doctest::Approx((prob.f(xp, u)[r] - prob.f(xm, u)[r]) / (2 * h)).epsilon(1e-5));
      CHECK(fu[r * 2 + k] ==
            doctest::Approx((prob.f(x, up)[r] - prob.f(x, um)[r]) / (2 * h)).epsilon(1e-5));
    }
  }
}

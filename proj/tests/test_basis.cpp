#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <sstream>

#include "doctest.h"
#include "mpoc/basis.hpp"

using namespace mpoc;

namespace {

// brute-force 1-d pair supremum by grid search
double sup_oracle_1d(BasisKind ka, double a, BasisKind kb, double b, double lo,
                     double hi, double step = 1e-4) {
  auto bump = [](BasisKind k, double c, double y) {
    const double d = y - c;
    return k.tag == BasisKind::Tag::Quadratic ? -k.c * d * d : -k.c * std::abs(d);
  };
  double best = -1e300;
  for (double y = lo; y <= hi + 1e-12; y += step)
    best = std::max(best, bump(ka, a, y) + bump(kb, b, y));
  return best;
}

}  // namespace

TEST_CASE("bump evaluation") {
  const Box X = Box::cube(2, -5.0, 5.0);
  BasisFamily q(BasisKind::quadratic(10.0), {{0.0, 0.0}, {1.0, -1.0}}, X);
  CHECK(q.eval(0, {0.0, 0.0}) == 0.0);
  CHECK(q.eval(0, {1.0, 2.0}) == doctest::Approx(-50.0));
  CHECK(q.eval(1, {0.0, 0.0}) == doctest::Approx(-20.0));
  BasisFamily l(BasisKind::cone(3.0), {{0.0, 0.0}}, X);
  CHECK(l.eval(0, {1.0, -2.0}) == doctest::Approx(-9.0));
}

TEST_CASE("family construction guards") {
  const Box X = Box::cube(1, 0.0, 1.0);
  CHECK_THROWS(BasisFamily(BasisKind::quadratic(-1.0), {{0.5}}, X));
  CHECK_THROWS(BasisFamily(BasisKind::quadratic(10.0), {{2.0}}, X));
  CHECK_THROWS(BasisFamily(BasisKind::quadratic(10.0), {{0.5}, {0.5}}, X));
}

TEST_CASE("add_center dedup") {
  const Box X = Box::cube(1, 0.0, 1.0);
  BasisFamily f(BasisKind::quadratic(10.0), {{0.0}, {1.0}}, X);
  CHECK_FALSE(f.add_center({0.05}, 0.1));
  CHECK(f.add_center({0.5}, 0.1));
  CHECK(f.size() == 3);
}

TEST_CASE("pairwise sup against grid-search oracle") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  const Box X = Box::cube(1, -2.0, 2.0);
  for (int rep = 0; rep < 40; ++rep) {
    const double a = pos(rng), b = pos(rng);
    for (auto ka : {BasisKind::quadratic(10.0), BasisKind::cone(10.0)}) {
      for (auto kb : {BasisKind::quadratic(4.0), BasisKind::cone(4.0)}) {
        BasisFamily fa(ka, {{a}}, X);
        BasisFamily fb(kb, {{b}}, X);
        const double got = pairwise_sup(fa, 0, fb, 0);
        const double want = sup_oracle_1d(ka, a, kb, b, -2.0, 2.0);
        CHECK(std::abs(got - want) < 2e-3);
        CHECK(got >= want - 1e-12);  // grid search can only undershoot
      }
    }
  }
  // within one family, symmetric
  BasisFamily f(BasisKind::quadratic(10.0), {{-1.0}, {0.5}}, X);
  CHECK(f.pairwise_sup(0, 1) == doctest::Approx(f.pairwise_sup(1, 0)));
}

TEST_CASE("clamped maximizer when the box cuts the branch optimum") {
  // On a narrow box the cone/quadratic branch optima b +- c_a/(2 c_b) fall
  // outside and the sup sits at a box end; cross-check with grid search.
  const Box X = Box::cube(1, 0.0, 1.0);
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> pos(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    BasisFamily cone(BasisKind::cone(5.0), {{pos(rng)}}, X);
    BasisFamily quad(BasisKind::quadratic(0.5), {{pos(rng)}}, X);
    const double got = pairwise_sup(cone, 0, quad, 0);
    const double want = sup_oracle_1d(cone.kind(), cone.center(0)[0], quad.kind(),
                                      quad.center(0)[0], 0.0, 1.0);
    CHECK(std::abs(got - want) < 1e-3);
    CHECK(got >= want - 1e-12);
  }
}

TEST_CASE("mass matrix on the two-center example") {
  const Box X = Box::cube(1, 0.0, 1.0);
  BasisFamily f(BasisKind::quadratic(10.0), {{0.0}, {1.0}}, X);
  const TropicalMatrix m = assemble_mass(f, f);
  CHECK(m.at(0, 0) == doctest::Approx(0.0));
  CHECK(m.at(1, 1) == doctest::Approx(0.0));
  CHECK(m.at(0, 1) == doctest::Approx(-5.0));
  CHECK(m.at(1, 0) == doctest::Approx(-5.0));
}

TEST_CASE("best fit is the maximal subsolution") {
  const Box X = Box::cube(1, -2.0, 2.0);
  BasisFamily f = BasisFamily::on_grid(BasisKind::quadratic(10.0), RegularGrid(X, 0.5));
  const auto samples = RegularGrid(X, 0.1).all_points();
  auto phi = [](const Vec& x) { return -0.5 * x[0] * x[0] + 1.0; };
  const TropicalVector lam = best_fit_coeffs(f, phi, samples);
  for (const auto& y : samples) CHECK(synthesize(f, lam, y) <= phi(y) + 1e-12);
  // maximality: raising any coefficient breaks the subsolution property
  for (long i = 0; i < f.size(); ++i) {
    TropicalVector up = lam;
    up[i] += 1e-6;
    bool violated = false;
    for (const auto& y : samples)
      if (synthesize(f, up, y) > phi(y) + 1e-12) violated = true;
    CHECK(violated);
  }
}

TEST_CASE("representable functions are reproduced exactly") {
  const Box X = Box::cube(1, -1.0, 1.0);
  BasisFamily f(BasisKind::quadratic(10.0), {{-0.5}, {0.5}}, X);
  auto phi = [&](const Vec& x) {
    return std::max(1.0 + f.eval(0, x), -0.5 + f.eval(1, x));
  };
  const auto samples = RegularGrid(X, 0.01).all_points();
  const TropicalVector lam = best_fit_coeffs(f, phi, samples);
  CHECK(lam[0] == doctest::Approx(1.0));
  CHECK(lam[1] == doctest::Approx(-0.5));
}

TEST_CASE("cone synthesis is c-Lipschitz") {
  const Box X = Box::cube(1, -2.0, 2.0);
  BasisFamily f = BasisFamily::on_grid(BasisKind::cone(3.0), RegularGrid(X, 0.5));
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> lamv(-2.0, 2.0), pos(-2.0, 2.0);
  TropicalVector lam(f.size());
  for (auto& v : lam) v = lamv(rng);
  for (int rep = 0; rep < 200; ++rep) {
    const Vec x{pos(rng)}, y{pos(rng)};
    CHECK(std::abs(synthesize(f, lam, x) - synthesize(f, lam, y)) <=
          3.0 * std::abs(x[0] - y[0]) + 1e-12);
  }
}

TEST_CASE("synthesize with -inf coefficients") {
  const Box X = Box::cube(1, 0.0, 1.0);
  BasisFamily f(BasisKind::quadratic(10.0), {{0.0}, {1.0}}, X);
  CHECK(trop::is_neg_inf(synthesize(f, {trop::neg_inf, trop::neg_inf}, {0.5})));
  CHECK_THROWS(synthesize(f, {0.0}, {0.5}));  // coefficient count mismatch
}

TEST_CASE("family dump/load round trip") {
  const Box X = Box::cube(2, -1.0, 1.0);
  BasisFamily f(BasisKind::cone(7.5), {{0.0, 0.25}, {-1.0, 1.0}}, X);
  std::stringstream ss;
  f.dump(ss);
  const BasisFamily back = BasisFamily::load(ss, X);
  REQUIRE(back.size() == f.size());
  CHECK(back.kind().tag == f.kind().tag);
  CHECK(back.kind().c == f.kind().c);
  for (long i = 0; i < f.size(); ++i) CHECK(back.center(i) == f.center(i));
}

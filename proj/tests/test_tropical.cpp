#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mpoc/tropical.hpp"

using namespace mpoc;

namespace {

TropicalMatrix random_matrix(std::mt19937& rng, bool integer) {
  std::uniform_int_distribution<long> dim(1, 8);
  const long r = dim(rng), c = dim(rng);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  std::uniform_int_distribution<int> ival(-10, 10);
  std::bernoulli_distribution drop(0.3);
  std::vector<double> e(r * c);
  for (auto& v : e)
    v = drop(rng) ? trop::neg_inf : (integer ? double(ival(rng)) : val(rng));
  TropicalMatrix m = TropicalMatrix::dense(r, c, std::move(e));
  std::bernoulli_distribution sparse(0.5);
  return sparse(rng) ? m.to_sparse() : m;
}

TropicalVector random_vector(std::mt19937& rng, long n, bool integer) {
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  std::uniform_int_distribution<int> ival(-10, 10);
  std::bernoulli_distribution drop(0.15);
  TropicalVector x(n);
  for (auto& v : x)
    v = drop(rng) ? trop::neg_inf : (integer ? double(ival(rng)) : val(rng));
  return x;
}

}  // namespace

TEST_CASE("scalar operations") {
  CHECK(trop::oplus(3.0, trop::neg_inf) == 3.0);
  CHECK(trop::otimes(3.0, 4.0) == 7.0);
  CHECK(trop::is_neg_inf(trop::otimes(trop::neg_inf, 5.0)));
  CHECK(trop::is_neg_inf(trop::otimes(trop::neg_inf, trop::neg_inf)));
  CHECK_THROWS_AS(trop::otimes(trop::neg_inf, trop::pos_inf), trop::UndefinedProduct);
  CHECK_THROWS_AS(trop::otimes(trop::pos_inf, trop::neg_inf), trop::UndefinedProduct);
  CHECK(trop::rdiff(5.0, 2.0) == 3.0);
  CHECK(trop::is_pos_inf(trop::rdiff(5.0, trop::neg_inf)));
  CHECK(trop::is_neg_inf(trop::rdiff(trop::neg_inf, 2.0)));
  CHECK(trop::is_pos_inf(trop::rdiff(trop::pos_inf, trop::pos_inf)));
}

TEST_CASE("arg_max breaks ties at the smallest index") {
  TropicalVector v{1.0, 7.0, 7.0, 2.0};
  auto [best, at] = arg_max(v);
  CHECK(best == 7.0);
  CHECK(at == 1);
  CHECK_THROWS(arg_max(TropicalVector{}));
}

TEST_CASE("identity and matvec") {
  const TropicalMatrix id = tropical_identity(3);
  TropicalVector x{1.0, trop::neg_inf, -2.0};
  CHECK(id.matvec(x) == x);
  TropicalMatrix m = TropicalMatrix::dense(2, 2, {0.0, -5.0, -5.0, 0.0});
  TropicalVector y = m.matvec({1.0, 2.0});
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(2.0));
}

TEST_CASE("law suite on random matrices") {
  std::mt19937 rng(7);
  long checked = 0;
  for (int rep = 0; rep < 1200; ++rep) {
    const bool integer = rep % 2 == 0;
    const TropicalMatrix m = random_matrix(rng, integer);
    const TropicalVector b = random_vector(rng, m.rows(), integer);
    const TropicalVector lam = m.residuate(b);
    const double tol = integer ? 0.0 : 1e-9;

    // Galois connection: M lambda <= b, and residuation is the maximum.
    REQUIRE(leq(m.matvec(lam), b, tol));
    const TropicalVector mu = random_vector(rng, m.cols(), integer);
    if (leq(m.matvec(mu), b, 0.0)) REQUIRE(leq(mu, lam, tol));

    // Projector idempotence.
    const TropicalVector p1 = m.project(mu);
    const TropicalVector p2 = m.project(p1);
    for (long i = 0; i < m.cols(); ++i) {
      if (!std::isfinite(p1[i]) || !std::isfinite(p2[i]))
        REQUIRE(p1[i] == p2[i]);
      else
        REQUIRE(std::abs(p1[i] - p2[i]) <= tol);
    }

    // Additive equivariance: residuation commutes with constant shifts.
    const TropicalVector shifted_res = m.residuate(shifted(b, 2.5));
    const TropicalVector res_shifted = shifted(lam, 2.5);
    for (long i = 0; i < m.cols(); ++i) {
      if (trop::is_pos_inf(shifted_res[i]) || trop::is_pos_inf(res_shifted[i]) ||
          trop::is_neg_inf(shifted_res[i]) || trop::is_neg_inf(res_shifted[i]))
        REQUIRE(shifted_res[i] == res_shifted[i]);
      else
        REQUIRE(std::abs(shifted_res[i] - res_shifted[i]) <= tol + 1e-12);
    }
    ++checked;
  }
  CHECK(checked >= 1000);
}

TEST_CASE("dense and sparse representations agree") {
  std::mt19937 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const TropicalMatrix m = random_matrix(rng, false);
    const TropicalMatrix md = m.to_dense();
    const TropicalMatrix ms = m.to_sparse();
    const TropicalVector x = random_vector(rng, m.cols(), false);
    const TropicalVector b = random_vector(rng, m.rows(), false);
    CHECK(md.matvec(x) == ms.matvec(x));
    CHECK(md.residuate(b) == ms.residuate(b));
    CHECK(md.nnz() == ms.nnz());
  }
}

TEST_CASE("dump/load round trip") {
  std::mt19937 rng(23);
  for (int rep = 0; rep < 50; ++rep) {
    const TropicalMatrix m = random_matrix(rng, false);
    std::stringstream ss;
    m.dump(ss);
    const TropicalMatrix back = TropicalMatrix::load(ss);
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    for (long j = 0; j < m.rows(); ++j)
      for (long i = 0; i < m.cols(); ++i) REQUIRE(back.at(j, i) == m.at(j, i));
  }
}

TEST_CASE("residuation over an empty constraint set yields +inf") {
  // Column with no finite entries constrains nothing.
  TropicalMatrix m = TropicalMatrix::dense(1, 2, {1.0, trop::neg_inf});
  const TropicalVector lam = m.residuate({0.0});
  CHECK(lam[0] == -1.0);
  CHECK(trop::is_pos_inf(lam[1]));
}

#include <doctest.h>

#include <cmath>

#include "clreach/random.hpp"
#include "clreach/simplex.hpp"
#include "oracles.hpp"

using namespace clreach;

namespace {

Matrix unit_box_rows() {
  Matrix A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  return A;
}

}  // namespace

TEST_CASE("support of the unit box in direction e1 is 1") {
  Vector c(2);
  c << 1, 0;
  Vector b = Vector::Ones(4);
  const LpResult res = simplex_maximize(c, unit_box_rows(), b);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("max x1+x2 over the standard simplex is 1") {
  Matrix A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  Vector b(3);
  b << 0, 0, 1;
  Vector c(2);
  c << 1, 1;
  const LpResult res = simplex_maximize(c, A, b);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((A * res.x - b).maxCoeff() <= 1e-8);
}

TEST_CASE("contradictory bounds are reported infeasible") {
  Matrix A(2, 1);
  A << 1, -1;
  Vector b(2);
  b << -1, -1;  // x <= -1 and x >= 1
  Vector c(1);
  c << 1;
  const LpResult res = simplex_maximize(c, A, b);
  CHECK(res.status == LpStatus::Infeasible);
  CHECK(std::isnan(res.value));
}

TEST_CASE("an unconstrained improving direction is reported unbounded") {
  Matrix A(1, 2);
  A << 1, 0;  // only x1 <= 3
  Vector b(1);
  b << 3;
  Vector c(2);
  c << 0, 1;
  const LpResult res = simplex_maximize(c, A, b);
  CHECK(res.status == LpStatus::Unbounded);
  CHECK(std::isinf(res.value));
}

TEST_CASE("negative offsets route through the feasibility phase") {
  // x >= 1, x <= 3, maximize -x: optimum at x = 1.
  Matrix A(2, 1);
  A << -1, 1;
  Vector b(2);
  b << -1, 3;
  Vector c(1);
  c << -1;
  const LpResult res = simplex_maximize(c, A, b);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("redundant constraints do not change the optimum") {
  Matrix A(6, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1, 1, 0, 0.5, 0.5;
  Vector b(6);
  b << 2, 0, 1, 0, 5, 4;
  Vector c(2);
  c << 3, 1;
  const LpResult res = simplex_maximize(c, A, b);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == doctest::Approx(7.0).epsilon(1e-10));
}

TEST_CASE("box support in 5D matches the closed form") {
  const Eigen::Index n = 5;
  Matrix A(2 * n, n);
  A.setZero();
  for (Eigen::Index i = 0; i < n; ++i) {
    A(2 * i, i) = 1;
    A(2 * i + 1, i) = -1;
  }
  Vector b = Vector::Ones(2 * n);
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Vector c(n);
    for (Eigen::Index i = 0; i < n; ++i) c[i] = rng.uniform(-3.0, 3.0);
    const LpResult res = simplex_maximize(c, A, b);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.value == doctest::Approx(c.cwiseAbs().sum()).epsilon(1e-9));
  }
}

TEST_CASE("random bounded 2D programs agree with vertex enumeration") {
  Rng rng(11);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    // Random box rows keep everything bounded; extra cuts add variety.
    const int cuts = 2 + static_cast<int>(rng.uniform(0.0, 3.0));
    Matrix A(4 + cuts, 2);
    Vector b(4 + cuts);
    const double w0 = rng.uniform(0.2, 3.0);
    const double w1 = rng.uniform(0.2, 3.0);
    const double c0 = rng.uniform(-2.0, 2.0);
    const double c1 = rng.uniform(-2.0, 2.0);
    A.topRows(4) = unit_box_rows();
    b.head(4) << c0 + w0, -(c0 - w0), c1 + w1, -(c1 - w1);
    for (int k = 0; k < cuts; ++k) {
      A(4 + k, 0) = rng.uniform(-1.0, 1.0);
      A(4 + k, 1) = rng.uniform(-1.0, 1.0);
      b[4 + k] = A(4 + k, 0) * c0 + A(4 + k, 1) * c1 + rng.uniform(0.05, 2.0);
    }
    Vector c(2);
    c << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
    const LpResult res = simplex_maximize(c, A, b);
    const auto ref = oracle::lp2d_max(c, A, b);
    REQUIRE(res.status == LpStatus::Optimal);
    REQUIRE(ref.has_value());
    CHECK(res.value == doctest::Approx(*ref).epsilon(1e-7));
    CHECK((A * res.x - b).maxCoeff() <= 1e-8);
    ++solved;
  }
  CHECK(solved == 200);
}

TEST_CASE("reported maximizer attains the reported value") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix A(4, 2);
    A = unit_box_rows();
    Vector b(4);
    b << rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
        rng.uniform(0.5, 2.0);
    Vector c(2);
    c << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
    const LpResult res = simplex_maximize(c, A, b);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(c.dot(res.x) == doctest::Approx(res.value).epsilon(1e-9));
  }
}

TEST_CASE("dimension mismatches are rejected") {
  Matrix A(2, 2);
  A.setIdentity();
  Vector b(3);
  b.setOnes();
  Vector c(2);
  c.setOnes();
  CHECK_THROWS_AS(simplex_maximize(c, A, b), DimensionMismatch);
}

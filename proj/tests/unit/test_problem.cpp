#include "doctest.h"

#include "cesrank/problem.hpp"

using namespace cesrank;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("problem construction validates shapes and values") {
  const auto ids = RankingProblem::default_ids(2);
  CHECK(ids == std::vector<std::string>{"0", "1"});
  CHECK_NOTHROW(RankingProblem::with_common_rho(ids, m2(0, 1, 1, 0), 0.5));

  CHECK_THROWS_AS(RankingProblem::with_common_rho(ids, Matrix::Zero(2, 3), 0.5), InvalidArgument);
  CHECK_THROWS_AS(RankingProblem::with_common_rho(ids, m2(0, -1, 1, 0), 0.5), InvalidArgument);
  CHECK_THROWS_AS(RankingProblem::with_common_rho(ids, m2(0, NAN, 1, 0), 0.5), InvalidArgument);
  CHECK_THROWS_AS(RankingProblem::with_common_rho({"a", "a"}, m2(0, 1, 1, 0), 0.5),
                  InvalidArgument);
  CHECK_THROWS_AS(RankingProblem(ids, m2(0, 1, 1, 0), Vector::Zero(3)), InvalidArgument);
}

TEST_CASE("rho range and the Cobb-Douglas sentinel") {
  const auto ids = RankingProblem::default_ids(2);
  const Matrix a = m2(0, 1, 1, 0);
  CHECK_NOTHROW(RankingProblem::with_common_rho(ids, a, -1.0));
  CHECK_NOTHROW(RankingProblem::with_common_rho(ids, a, 0.0));
  CHECK_NOTHROW(RankingProblem::with_common_rho(ids, a, 0.999));
  CHECK_THROWS_AS(RankingProblem::with_common_rho(ids, a, 1.0), InvalidArgument);
  CHECK_THROWS_AS(RankingProblem::with_common_rho(ids, a, -1.0001), InvalidArgument);
  // near-zero values are ambiguous between the CES formula and the limit
  CHECK_THROWS_AS(RankingProblem::with_common_rho(ids, a, 1e-12), InvalidArgument);
  CHECK_THROWS_AS(RankingProblem::with_common_rho(ids, a, -5e-10), InvalidArgument);
  CHECK_NOTHROW(RankingProblem::with_common_rho(ids, a, 2e-9));
}

TEST_CASE("beta must lie in (0, 1]") {
  const auto ids = RankingProblem::default_ids(2);
  const Matrix a = m2(0, 1, 1, 0);
  CHECK(RankingProblem::with_common_rho(ids, a, 0.5).beta() == doctest::Approx(0.85));
  CHECK_THROWS_AS(RankingProblem::with_common_rho(ids, a, 0.5, 0.0), InvalidArgument);
  CHECK_THROWS_AS(RankingProblem::with_common_rho(ids, a, 0.5, 1.5), InvalidArgument);
  CHECK_NOTHROW(RankingProblem::with_common_rho(ids, a, 0.5, 1.0));
}

TEST_CASE("normalization follows zero-row, row-sum and damping steps") {
  Matrix a(3, 3);
  a << 0, 2, 2,
       0, 0, 0,
       1, 3, 0;
  const auto p = RankingProblem::with_common_rho(RankingProblem::default_ids(3), a, 0.5, 0.85);
  const auto norm = normalize_preferences(p);
  const Matrix& h = norm.alpha_hat();
  const double t = 0.15 / 3;
  // hand values: row 0 -> (0, .5, .5), row 1 -> 1/3 each, row 2 -> (.25, .75, 0)
  CHECK(h(0, 0) == doctest::Approx(t));
  CHECK(h(0, 1) == doctest::Approx(0.85 * 0.5 + t));
  CHECK(h(1, 1) == doctest::Approx(1.0 / 3));
  CHECK(h(2, 0) == doctest::Approx(0.85 * 0.25 + t));
  CHECK(h(2, 1) == doctest::Approx(0.85 * 0.75 + t));
  CHECK(h(2, 2) == doctest::Approx(t));
  for (int i = 0; i < 3; ++i) CHECK(h.row(i).sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((h.array() > 0).all());

  // beta = 1 keeps zeros
  const auto undamped = normalize_preferences(p.with_beta(1.0));
  CHECK(undamped.alpha_hat()(0, 0) == 0.0);
  CHECK(undamped.alpha_hat()(2, 1) == doctest::Approx(0.75));
}

TEST_CASE("all-zero preferences normalize to the uniform matrix") {
  const auto p = RankingProblem::with_common_rho(RankingProblem::default_ids(4),
                                                 Matrix::Zero(4, 4), 0.0, 0.85);
  const auto norm = normalize_preferences(p);
  const Matrix& h = norm.alpha_hat();
  CHECK((h.array() - 0.25).abs().maxCoeff() < 1e-15);
}

TEST_CASE("scaling a row does not change the normalized matrix") {
  Matrix a(2, 2);
  a << 1, 3, 2, 5;
  const auto p = RankingProblem::with_common_rho(RankingProblem::default_ids(2), a, 0.5);
  const auto scaled = p.with_scaled_row(1, 1000.0);
  CHECK(scaled.alpha()(1, 1) == doctest::Approx(5000.0));
  const Matrix diff = normalize_preferences(p).alpha_hat() - normalize_preferences(scaled).alpha_hat();
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(p.with_scaled_row(0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(p.with_scaled_row(2, 1.0), InvalidArgument);
}

TEST_CASE("regularity") {
  Matrix a(3, 3);
  a << 1.0 / 3, 1.0 / 3, 1.0 / 3,
       5.0 / 12, 1.0 / 6, 5.0 / 12,
       1.0 / 4, 1.0 / 2, 1.0 / 4;
  CHECK(is_regular(a));
  Matrix b = a;
  b(0, 0) += 0.01;
  b(0, 1) -= 0.01;
  CHECK_FALSE(is_regular(b));
  CHECK_FALSE(is_regular(Matrix::Zero(2, 3)));
}

TEST_CASE("equality compares every field, including shape") {
  const auto ids = RankingProblem::default_ids(2);
  const auto p = RankingProblem::with_common_rho(ids, m2(0, 1, 1, 0), 0.5);
  CHECK(p == RankingProblem::with_common_rho(ids, m2(0, 1, 1, 0), 0.5));
  CHECK_FALSE(p == p.with_beta(1.0));
  CHECK_FALSE(p == RankingProblem::with_common_rho(ids, m2(0, 1, 1, 0), 0.25));
  const auto q = RankingProblem::with_common_rho(RankingProblem::default_ids(3),
                                                 Matrix::Zero(3, 3), 0.5);
  CHECK_FALSE(p == q);
}

TEST_CASE("common rho detection") {
  const auto ids = RankingProblem::default_ids(2);
  Vector rho(2);
  rho << 0.5, 0.25;
  CHECK_FALSE(RankingProblem(ids, m2(0, 1, 1, 0), rho).has_common_rho());
  CHECK(RankingProblem::with_common_rho(ids, m2(0, 1, 1, 0), 0.5).has_common_rho());
}

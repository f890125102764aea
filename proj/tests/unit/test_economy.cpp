#include "doctest.h"

#include "cesrank/economy.hpp"
#include "cesrank/io.hpp"

#include "../support/oracles.hpp"

#include <random>

using namespace cesrank;

TEST_CASE("price vectors live on the open simplex") {
  Vector p(2);
  p << 0.5, 0.5;
  CHECK_NOTHROW(PriceVector{p});
  p << 0.0, 1.0;
  CHECK_THROWS_AS(PriceVector{p}, InvalidArgument);
  p << 0.4, 0.4;
  CHECK_THROWS_AS(PriceVector{p}, InvalidArgument);
  p << 2.0, 6.0;
  CHECK(PriceVector::normalized(p)[1] == doctest::Approx(0.75));
}

TEST_CASE("economy validation") {
  Matrix a = Matrix::Ones(2, 2);
  Vector rho = Vector::Zero(2);
  CHECK_NOTHROW(CesEconomy::with_unit_endowments(a, rho));
  Vector high(2);
  high << 0.96, 0.0;
  CHECK_THROWS_AS(CesEconomy::with_unit_endowments(a, high), InvalidArgument);
  Matrix dead = a;
  dead.row(1).setZero();
  CHECK_THROWS_AS(CesEconomy::with_unit_endowments(dead, rho), InvalidArgument);
  Matrix w = Matrix::Identity(2, 2);
  w(1, 1) = 0.0;
  CHECK_THROWS_AS(CesEconomy(a, rho, w), InvalidArgument);
}

TEST_CASE("demand matches the textbook CES formula") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (double rho : {-1.0, -0.5, 0.3, 0.7, 0.9, 0.95}) {
    for (int t = 0; t < 20; ++t) {
      const int n = 2 + t % 5;
      oracle::Vec alpha(n), prices(n);
      for (int j = 0; j < n; ++j) {
        alpha[j] = t % 3 == 0 && j == 0 ? 0.0 : u(rng);
        prices[j] = u(rng);
      }
      const double income = u(rng);
      Vector a(n), p(n);
      for (int j = 0; j < n; ++j) {
        a(j) = alpha[j];
        p(j) = prices[j];
      }
      const Vector x = ces_demand_formula(a, rho, p, income);
      const auto ref = oracle::ces_demand(alpha, rho, prices, income);
      for (int j = 0; j < n; ++j) CHECK(x(j) == doctest::Approx(ref[j]).epsilon(1e-12));
      CHECK(p.dot(x) == doctest::Approx(income).epsilon(1e-13));
    }
  }
}

TEST_CASE("Cobb-Douglas traders spend fixed budget shares") {
  Matrix a(2, 2);
  a << 1, 3, 2, 2;
  const auto e = CesEconomy::with_unit_endowments(a, Vector::Zero(2));
  Vector p(2);
  p << 0.2, 0.8;
  const Vector x = ces_demand(e, 0, p);
  // income 0.2, shares 1/4 and 3/4
  CHECK(x(0) == doctest::Approx(0.25 * 0.2 / 0.2));
  CHECK(x(1) == doctest::Approx(0.75 * 0.2 / 0.8));
}

TEST_CASE("the CES formula approaches Cobb-Douglas as rho -> 0") {
  Matrix a(3, 3);
  a << 0.2, 0.5, 0.3,
       1.0, 2.0, 0.5,
       0.1, 0.1, 3.0;
  Matrix w(3, 3);
  w << 0.5, 0.2, 0.1, 0.3, 0.3, 0.3, 0.0, 0.9, 0.4;
  const CesEconomy e(a, Vector::Zero(3), w);
  Vector p(3);
  p << 0.3, 0.3, 0.4;
  for (int i = 0; i < 3; ++i) {
    const Vector cd = cobb_douglas_demand(e, i, p);
    const double income = w.row(i).dot(p);
    for (double rho : {1e-6, -1e-6}) {
      const Vector near = ces_demand_formula(a.row(i).transpose(), rho, p, income);
      for (int j = 0; j < 3; ++j) CHECK(near(j) == doctest::Approx(cd(j)).epsilon(1e-4));
    }
  }
}

TEST_CASE("log-space demand survives extreme coefficients") {
  Vector a(2), p(2);
  a << 1e-12, 1.0;
  p << 0.5, 0.5;
  const Vector x = ces_demand_formula(a, 0.95, p, 1.0);
  CHECK(std::isfinite(x(0)));
  CHECK(x(1) == doctest::Approx(2.0));
  CHECK(p.dot(x) == doctest::Approx(1.0));
}

TEST_CASE("counterexample excess demand at uniform prices") {
  const auto e = build_economy(normalize_preferences(regular_counterexample()));
  const Vector z = excess_demand(e, PriceVector::uniform(3).values());
  // exact values: -1/27, 2/27, -1/27
  CHECK(z(0) == doctest::Approx(-1.0 / 27).epsilon(1e-12));
  CHECK(z(1) == doctest::Approx(2.0 / 27).epsilon(1e-12));
  CHECK(z(2) == doctest::Approx(-1.0 / 27).epsilon(1e-12));
  const Vector x2 = ces_demand(e, 1, PriceVector::uniform(3).values());
  CHECK(x2(0) == doctest::Approx(25.0 / 54).epsilon(1e-12));
}

TEST_CASE("Markov reduction keeps P as the coefficient matrix") {
  Matrix p(2, 2);
  p << 0.1, 0.9, 0.6, 0.4;
  const auto e = markov_to_economy(TransitionMatrix(p));
  CHECK(e.all_cobb_douglas());
  CHECK(e.has_unit_endowments());
  CHECK(e.alpha().isApprox(p));

  Matrix reducible(2, 2);
  reducible << 1, 0, 0.5, 0.5;
  CHECK_THROWS_AS(markov_to_economy(TransitionMatrix(reducible)), NotStronglyConnected);
}

TEST_CASE("ranking economies need a strongly connected preference graph") {
  Matrix a(2, 2);
  a << 1, 0, 0, 1;
  const auto p = RankingProblem::with_common_rho(RankingProblem::default_ids(2), a, 0.5, 1.0);
  CHECK_THROWS_AS(build_economy(normalize_preferences(p)), NotStronglyConnected);
  CHECK_NOTHROW(build_economy(normalize_preferences(p.with_beta(0.85))));
}

TEST_CASE("excess demand Jacobian matches finite differences of the reference demand") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 1.0), r(-1.0, 0.95);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 6;
    Matrix a(n, n), w(n, n);
    Vector rho(n), p(n);
    for (int i = 0; i < n; ++i) {
      rho(i) = t % 4 == 0 ? 0.0 : r(rng);
      if (std::abs(rho(i)) < 1e-3) rho(i) = 0.0;
      p(i) = u(rng);
      for (int j = 0; j < n; ++j) {
        a(i, j) = u(rng);
        w(i, j) = u(rng);
      }
    }
    const CesEconomy e(a, rho, w);
    // aggregate demand from the textbook formula only
    auto demand = [&](const Vector& prices) {
      oracle::Vec total(n, 0.0), pv(prices.data(), prices.data() + n);
      for (int i = 0; i < n; ++i) {
        oracle::Vec ai(n);
        for (int j = 0; j < n; ++j) ai[j] = a(i, j);
        const double income = w.row(i).dot(prices);
        oracle::Vec x(n);
        if (rho(i) == 0.0) {
          for (int j = 0; j < n; ++j) x[j] = income * ai[j] / a.row(i).sum() / pv[j];
        } else {
          x = oracle::ces_demand(ai, rho(i), pv, income);
        }
        for (int j = 0; j < n; ++j) total[j] += x[j];
      }
      return total;
    };
    const Matrix jac = excess_demand_jacobian(e, p);
    for (int l = 0; l < n; ++l) {
      const double h = 1e-6 * p(l);
      Vector up = p, down = p;
      up(l) += h;
      down(l) -= h;
      const auto zu = demand(up), zd = demand(down);
      for (int j = 0; j < n; ++j) {
        const double fd = (zu[j] - zd[j]) / (2 * h);
        CHECK(jac(j, l) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
    }
    // homogeneity of degree zero: J pi = 0
    CHECK((jac * p).cwiseAbs().maxCoeff() < 1e-10);
  }
}

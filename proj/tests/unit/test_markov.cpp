#include "doctest.h"

#include "cesrank/markov.hpp"

#include "../support/oracles.hpp"

#include <random>

using namespace cesrank;

namespace {

Matrix from_std(const oracle::Mat& m) {
  Matrix out(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = m[i][j];
  return out;
}

}  // namespace

TEST_CASE("graph construction rejects bad edges") {
  CHECK_THROWS_AS(DirectedGraph(2, {{0, 2}}), InvalidArgument);
  CHECK_THROWS_AS(DirectedGraph(2, {{-1, 0}}), InvalidArgument);
  CHECK_THROWS_AS(DirectedGraph(2, {{0, 1}, {0, 1}}), InvalidArgument);
  CHECK_THROWS_AS(DirectedGraph(0), InvalidArgument);
  const DirectedGraph g(3, {{2, 0}, {0, 1}});
  CHECK(g.successors(0) == std::vector<int>{1});
  CHECK(g.predecessors(0) == std::vector<int>{2});
  CHECK(g.out_degree(1) == 0);
  CHECK_FALSE(g.has_self_loop());
  CHECK(DirectedGraph(2, {{1, 1}}).has_self_loop());
}

TEST_CASE("transition matrices must be row-stochastic") {
  Matrix p(2, 2);
  p << 0.5, 0.5, 0.2, 0.7;
  CHECK_THROWS_AS(TransitionMatrix{p}, InvalidArgument);
  p << 0.5, 0.5, -0.1, 1.1;
  CHECK_THROWS_AS(TransitionMatrix{p}, InvalidArgument);
  Matrix w(2, 2);
  w << 1, 3, 0, 0;
  CHECK_THROWS_AS(TransitionMatrix::from_weights(w), InvalidArgument);
  w << 1, 3, 0, 2;
  const auto t = TransitionMatrix::from_weights(w);
  CHECK(t(0, 1) == doctest::Approx(0.75));
  CHECK(t(1, 1) == 1.0);
}

TEST_CASE("two-cycle PageRank is (1/2, 1/2)") {
  const auto p = build_web_transition(DirectedGraph(2, {{0, 1}, {1, 0}}), 0.85);
  CHECK(p(0, 0) == doctest::Approx(0.075));
  CHECK(p(0, 1) == doctest::Approx(0.925));
  for (auto method : {StationaryMethod::power_iteration, StationaryMethod::linear_solve}) {
    StationaryOptions o;
    o.method = method;
    const auto [pi, report] = stationary_distribution(p, o);
    CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(report.converged);
  }
}

TEST_CASE("dangling rows become uniform before damping") {
  // 0 -> 1, 0 -> 2, 1 -> 2, 2 dangling
  const DirectedGraph g(3, {{0, 1}, {0, 2}, {1, 2}});
  const auto p = build_web_transition(g, 0.85);
  CHECK(p(2, 0) == doctest::Approx(1.0 / 3));
  CHECK(p(0, 1) == doctest::Approx(0.85 * 0.5 + 0.05));
  CHECK(p(1, 2) == doctest::Approx(0.85 + 0.05));
  CHECK(p(1, 0) == doctest::Approx(0.05));
  CHECK_THROWS_AS(build_web_transition(g, 1.0), InvalidArgument);
  CHECK_THROWS_AS(build_web_transition(g, 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_web_transition(DirectedGraph(2, {{0, 0}}), 0.85), InvalidArgument);
}

TEST_CASE("stationary distribution agrees with an independent elimination") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const int n = 3 + t % 20;
    const auto edges = oracle::random_strong_digraph(n, 0.2, rng);
    const auto ref = oracle::stationary(oracle::pagerank_matrix(n, edges, 0.85));
    const auto p = build_web_transition(DirectedGraph(n, edges), 0.85);
    CHECK(from_std(oracle::pagerank_matrix(n, edges, 0.85)).isApprox(p.matrix(), 1e-14));
    for (auto method : {StationaryMethod::power_iteration, StationaryMethod::linear_solve}) {
      StationaryOptions o;
      o.method = method;
      const auto pi = stationary_distribution(p, o).first;
      double gap = 0.0;
      for (int i = 0; i < n; ++i) gap = std::max(gap, std::abs(pi[i] - ref[i]));
      CHECK(gap < 1e-10);
      CHECK(stationary_residual(p, pi.values()) < 1e-10);
    }
  }
}

TEST_CASE("power iteration cannot settle on a periodic chain") {
  // bipartite chain with period 2 and stationary vector (1/2, 1/4, 1/4)
  Matrix p(3, 3);
  p << 0, 0.5, 0.5,
       1, 0, 0,
       1, 0, 0;
  StationaryOptions power;
  power.method = StationaryMethod::power_iteration;
  power.max_iters = 500;
  CHECK_THROWS_AS(stationary_distribution(TransitionMatrix(p), power), ConvergenceError);
  StationaryOptions linear;
  linear.method = StationaryMethod::linear_solve;
  const auto pi = stationary_distribution(TransitionMatrix(p), linear).first;
  CHECK(pi[0] == doctest::Approx(0.5));
  CHECK(pi[1] == doctest::Approx(0.25));
}

TEST_CASE("reducible chains have no unique linear solution") {
  Matrix p = Matrix::Identity(2, 2);
  StationaryOptions linear;
  linear.method = StationaryMethod::linear_solve;
  CHECK_THROWS_AS(stationary_distribution(TransitionMatrix(p), linear), InvalidArgument);
}

TEST_CASE("strongly connected components") {
  // {0,1} cycle, 2 -> 0, {3} isolated
  const DirectedGraph g(4, {{0, 1}, {1, 0}, {2, 0}});
  const auto comp = strongly_connected_components(g);
  CHECK(comp[0] == comp[1]);
  CHECK(comp[2] != comp[0]);
  CHECK(comp[3] != comp[2]);
  CHECK(comp[0] == 0);  // labels follow first vertex index
  CHECK_FALSE(is_strongly_connected(g));
  CHECK(is_strongly_connected(DirectedGraph(1)));
  try {
    require_strongly_connected(g, "test");
    FAIL("expected NotStronglyConnected");
  } catch (const NotStronglyConnected& e) {
    CHECK(e.component().size() == 4);
    CHECK(std::string(e.what()).find("test") != std::string::npos);
  }
}

TEST_CASE("long path does not overflow the SCC search") {
  const int n = 200000;
  std::vector<DirectedGraph::Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  CHECK(is_strongly_connected(DirectedGraph(n, edges)));
}

TEST_CASE("aperiodicity uses the cycle-length gcd") {
  // 3-cycle: period 3
  CHECK_FALSE(is_aperiodic(DirectedGraph(3, {{0, 1}, {1, 2}, {2, 0}})));
  // 3-cycle plus 2-cycle: gcd 1
  CHECK(is_aperiodic(DirectedGraph(3, {{0, 1}, {1, 2}, {2, 0}, {1, 0}})));
  // 4-cycle plus 2-cycle: gcd 2
  CHECK_FALSE(is_aperiodic(DirectedGraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 0}})));
  // self-loop
  CHECK(is_aperiodic(DirectedGraph(2, {{0, 1}, {1, 0}, {0, 0}})));
  CHECK_THROWS_AS(is_aperiodic(DirectedGraph(2, {{0, 1}})), NotStronglyConnected);
}

TEST_CASE("distribution validation") {
  Vector v(2);
  v << 0.5, 0.6;
  CHECK_THROWS_AS(Distribution{v}, InvalidArgument);
  v << -0.1, 1.1;
  CHECK_THROWS_AS(Distribution{v}, InvalidArgument);
  v << 0.25, 0.75;
  CHECK_NOTHROW(Distribution{v});
}

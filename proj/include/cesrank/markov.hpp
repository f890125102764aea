#pragma once

#include "cesrank/common.hpp"

#include <utility>
#include <vector>

namespace cesrank {

inline constexpr double kDefaultPageRankDamping = 0.85;

// Directed graph on vertices 0..n-1 with no duplicate edges. Self-loops are
// representable; the PageRank construction rejects them.
class DirectedGraph {
 public:
  using Edge = std::pair<int, int>;

  explicit DirectedGraph(int n, std::vector<Edge> edges = {});

  // Edge i -> j for every entry weights(i, j) > 0.
  static DirectedGraph from_support(const Matrix& weights);

  int size() const { return n_; }
  // Sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& successors(int v) const { return out_[v]; }
  const std::vector<int>& predecessors(int v) const { return in_[v]; }
  int out_degree(int v) const { return static_cast<int>(out_[v].size()); }
  bool has_self_loop() const;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

// Row-stochastic matrix: entries in [0, 1], each row summing to one within
// `tolerance`.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(Matrix p, double tolerance = 1e-12);

  // Divides each row by its sum. Rows must be nonnegative with positive sum.
  static TransitionMatrix from_weights(const Matrix& weights);

  int size() const { return static_cast<int>(p_.rows()); }
  const Matrix& matrix() const { return p_; }
  double operator()(int i, int j) const { return p_(i, j); }

  // Edge i -> j iff p(i, j) > 0.
  DirectedGraph state_graph() const { return DirectedGraph::from_support(p_); }

 private:
  Matrix p_;
};

// Probability vector, stored as a column vector pi with pi = P^T pi at
// stationarity.
class Distribution {
 public:
  explicit Distribution(Vector pi);

  int size() const { return static_cast<int>(pi_.size()); }
  const Vector& values() const { return pi_; }
  double operator[](int i) const { return pi_(i); }

 private:
  Vector pi_;
};

// PageRank chain P = c * T_bar + (1 - c) / N, where T_bar(i, j) = 1/out(i)
// along edges and dangling rows are replaced by the uniform row.
TransitionMatrix build_web_transition(const DirectedGraph& graph,
                                      double damping = kDefaultPageRankDamping);

enum class StationaryMethod { automatic, power_iteration, linear_solve };

struct StationaryOptions {
  StationaryMethod method = StationaryMethod::automatic;
  // Residual bound ||P^T pi - pi||_inf accepted on return.
  double tolerance = 1e-10;
  // Power iteration stops once ||pi_{t+1} - pi_t||_1 falls below this.
  double step_tolerance = 1e-12;
  long max_iters = 100000;
  // `automatic` uses the linear solve up to this size.
  int linear_solve_limit = 2000;
};

// Stationary distribution of P.
//
// The linear solve replaces one equation of (P^T - I) pi = 0 with sum(pi) = 1
// and returns the unique invariant distribution of any irreducible chain,
// periodic or not. Power iteration starts from the uniform vector and needs an
// aperiodic chain; on a periodic chain it raises ConvergenceError carrying the
// last iterate.
std::pair<Distribution, SolverReport> stationary_distribution(
    const TransitionMatrix& p, const StationaryOptions& options = {});

// ||P^T pi - pi||_inf.
double stationary_residual(const TransitionMatrix& p, const Vector& pi);

// Component label per vertex; labels are 0..k-1 in order of first discovery
// by vertex index.
std::vector<int> strongly_connected_components(const DirectedGraph& graph);

bool is_strongly_connected(const DirectedGraph& graph);

// Period-one test via BFS levels: the chain is aperiodic iff the gcd of
// level(u) + 1 - level(v) over all edges (u, v) is 1. Throws
// NotStronglyConnected on reducible graphs.
bool is_aperiodic(const DirectedGraph& graph);

// Throws NotStronglyConnected naming the components when the graph is not
// strongly connected. `context` prefixes the message.
void require_strongly_connected(const DirectedGraph& graph, const std::string& context);

}  // namespace cesrank

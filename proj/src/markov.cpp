#include "cesrank/markov.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace cesrank {

DirectedGraph::DirectedGraph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), out_(n < 0 ? 0 : n), in_(n < 0 ? 0 : n) {
  if (n_ < 1) throw InvalidArgument("a graph needs at least one vertex");
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto [u, v] = edges_[k];
    if (u < 0 || u >= n_ || v < 0 || v >= n_) {
      std::ostringstream msg;
      msg << "edge (" << u << ", " << v << ") is out of range for " << n_ << " vertices";
      throw InvalidArgument(msg.str());
    }
    if (k > 0 && edges_[k - 1] == edges_[k]) {
      std::ostringstream msg;
      msg << "duplicate edge (" << u << ", " << v << ")";
      throw InvalidArgument(msg.str());
    }
    out_[u].push_back(v);
    in_[v].push_back(u);
  }
}

DirectedGraph DirectedGraph::from_support(const Matrix& weights) {
  if (weights.rows() != weights.cols()) throw InvalidArgument("weight matrix must be square");
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      if (weights(i, j) > 0.0) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return DirectedGraph(static_cast<int>(weights.rows()), std::move(edges));
}

bool DirectedGraph::has_self_loop() const {
  return std::any_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.first == e.second; });
}

TransitionMatrix::TransitionMatrix(Matrix p, double tolerance) : p_(std::move(p)) {
  if (p_.rows() < 1 || p_.rows() != p_.cols()) {
    throw InvalidArgument("transition matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < p_.rows(); ++i) {
    for (Eigen::Index j = 0; j < p_.cols(); ++j) {
      const double v = p_(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        std::ostringstream msg;
        msg << "transition probability p(" << i << ", " << j << ") = " << v
            << " is outside [0, 1]";
        throw InvalidArgument(msg.str());
      }
    }
    const double sum = p_.row(i).sum();
    if (std::abs(sum - 1.0) > tolerance) {
      std::ostringstream msg;
      msg << "row " << i << " of the transition matrix sums to " << sum;
      throw InvalidArgument(msg.str());
    }
  }
}

TransitionMatrix TransitionMatrix::from_weights(const Matrix& weights) {
  Matrix p = weights;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    if ((p.row(i).array() < 0.0).any() || !p.row(i).allFinite()) {
      throw InvalidArgument("row " + std::to_string(i) + " has negative or non-finite weights");
    }
    const double sum = p.row(i).sum();
    if (!(sum > 0.0)) {
      throw InvalidArgument("row " + std::to_string(i) + " has no outgoing weight");
    }
    p.row(i) /= sum;
  }
  return TransitionMatrix(std::move(p));
}

Distribution::Distribution(Vector pi) : pi_(std::move(pi)) {
  if (pi_.size() < 1) throw InvalidArgument("a distribution needs at least one entry");
  if (!pi_.allFinite() || (pi_.array() < 0.0).any()) {
    throw InvalidArgument("distribution entries must be finite and nonnegative");
  }
  if (std::abs(pi_.sum() - 1.0) > 1e-10) {
    throw InvalidArgument("distribution entries must sum to 1");
  }
}

TransitionMatrix build_web_transition(const DirectedGraph& graph, double damping) {
  if (!(damping > 0.0 && damping < 1.0)) {
    throw InvalidArgument("PageRank damping must lie in (0, 1)");
  }
  if (graph.has_self_loop()) throw InvalidArgument("PageRank graphs may not contain self-loops");
  const int n = graph.size();
  const double teleport = (1.0 - damping) / n;
  Matrix p(n, n);
  for (int i = 0; i < n; ++i) {
    const int out = graph.out_degree(i);
    if (out == 0) {
      // dangling: T_bar row is e/N, so P row is c/N + (1-c)/N = 1/N
      p.row(i).setConstant(1.0 / n);
      continue;
    }
    p.row(i).setConstant(teleport);
    const double share = damping / out;
    for (int j : graph.successors(i)) p(i, j) += share;
  }
  return TransitionMatrix(std::move(p));
}

double stationary_residual(const TransitionMatrix& p, const Vector& pi) {
  return (p.matrix().transpose() * pi - pi).cwiseAbs().maxCoeff();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::pair<Distribution, SolverReport> power_iteration(const TransitionMatrix& p,
                                                      const StationaryOptions& opt) {
  const auto start = Clock::now();
  const int n = p.size();
  const Matrix pt = p.matrix().transpose();
  Vector pi = Vector::Constant(n, 1.0 / n);
  Vector next(n);
  double step = 0.0;
  for (long it = 1; it <= opt.max_iters; ++it) {
    next.noalias() = pt * pi;
    next /= next.sum();
    step = (next - pi).lpNorm<1>();
    pi.swap(next);
    if (step <= opt.step_tolerance) {
      SolverReport report;
      report.iterations = it;
      report.residual = stationary_residual(p, pi);
      report.method = "power_iteration";
      report.converged = report.residual <= opt.tolerance;
      report.wall_time_seconds = seconds_since(start);
      if (!report.converged) {
        throw ConvergenceError("power iteration stalled above the residual tolerance", pi,
                               report.residual);
      }
      return {Distribution(std::move(pi)), report};
    }
  }
  std::ostringstream msg;
  msg << "power iteration did not converge within " << opt.max_iters
      << " iterations (last step " << step << "); the chain may be periodic";
  throw ConvergenceError(msg.str(), pi, stationary_residual(p, pi));
}

std::pair<Distribution, SolverReport> linear_solve(const TransitionMatrix& p,
                                                   const StationaryOptions& opt) {
  const auto start = Clock::now();
  const int n = p.size();
  Matrix system = p.matrix().transpose() - Matrix::Identity(n, n);
  system.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::FullPivLU<Matrix> lu(system);
  if (lu.rank() < n) {
    throw InvalidArgument(
        "the chain has no unique stationary distribution (transition graph is reducible)");
  }
  Vector pi = lu.solve(rhs);
  for (int i = 0; i < n; ++i) {
    if (pi(i) < 0.0) {
      if (pi(i) < -1e-12) {
        throw ConvergenceError("linear solve produced a negative stationary probability", pi,
                               stationary_residual(p, pi));
      }
      pi(i) = 0.0;
    }
  }
  pi /= pi.sum();

  SolverReport report;
  report.iterations = 1;
  report.residual = stationary_residual(p, pi);
  report.method = "linear_solve";
  report.converged = report.residual <= opt.tolerance;
  report.wall_time_seconds = seconds_since(start);
  if (!report.converged) {
    throw ConvergenceError("linear solve residual exceeds tolerance", pi, report.residual);
  }
  return {Distribution(std::move(pi)), report};
}

}  // namespace

std::pair<Distribution, SolverReport> stationary_distribution(const TransitionMatrix& p,
                                                              const StationaryOptions& options) {
  if (!(options.tolerance > 0.0) || options.max_iters < 1) {
    throw InvalidArgument("stationary options need a positive tolerance and max_iters >= 1");
  }
  switch (options.method) {
    case StationaryMethod::power_iteration:
      return power_iteration(p, options);
    case StationaryMethod::linear_solve:
      return linear_solve(p, options);
    case StationaryMethod::automatic:
      break;
  }
  return p.size() <= options.linear_solve_limit ? linear_solve(p, options)
                                                : power_iteration(p, options);
}

std::vector<int> strongly_connected_components(const DirectedGraph& graph) {
  // Iterative Tarjan.
  const int n = graph.size();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> frames;
  int counter = 0;
  int components = 0;

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next_child] = frames.back();
      const auto& succ = graph.successors(v);
      if (next_child < succ.size()) {
        const int w = succ[next_child++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components;
        } while (w != v);
        ++components;
      }
      const int finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        const int parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }

  // Relabel in order of first appearance by vertex index.
  std::vector<int> relabel(components, -1);
  int next_label = 0;
  for (int v = 0; v < n; ++v) {
    if (relabel[comp[v]] == -1) relabel[comp[v]] = next_label++;
    comp[v] = relabel[comp[v]];
  }
  return comp;
}

bool is_strongly_connected(const DirectedGraph& graph) {
  const int n = graph.size();
  auto reaches_all = [&](bool forward) {
    std::vector<bool> seen(n, false);
    std::vector<int> todo{0};
    seen[0] = true;
    int count = 1;
    while (!todo.empty()) {
      const int v = todo.back();
      todo.pop_back();
      for (int w : forward ? graph.successors(v) : graph.predecessors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          todo.push_back(w);
        }
      }
    }
    return count == n;
  };
  return reaches_all(true) && reaches_all(false);
}

void require_strongly_connected(const DirectedGraph& graph, const std::string& context) {
  if (is_strongly_connected(graph)) return;
  auto comp = strongly_connected_components(graph);
  const int k = *std::max_element(comp.begin(), comp.end()) + 1;
  std::ostringstream msg;
  msg << context << ": graph is not strongly connected (" << k << " components;";
  for (int c = 0; c < k && c < 4; ++c) {
    msg << " {";
    int shown = 0;
    for (int v = 0; v < graph.size(); ++v) {
      if (comp[v] != c) continue;
      if (shown == 8) {
        msg << ", ...";
        break;
      }
      msg << (shown++ ? ", " : "") << v;
    }
    msg << "}";
  }
  if (k > 4) msg << " ...";
  msg << ")";
  throw NotStronglyConnected(msg.str(), std::move(comp));
}

bool is_aperiodic(const DirectedGraph& graph) {
  require_strongly_connected(graph, "aperiodicity test");
  const int n = graph.size();
  std::vector<int> level(n, -1);
  std::queue<int> todo;
  level[0] = 0;
  todo.push(0);
  while (!todo.empty()) {
    const int v = todo.front();
    todo.pop();
    for (int w : graph.successors(v)) {
      if (level[w] == -1) {
        level[w] = level[v] + 1;
        todo.push(w);
      }
    }
  }
  int period = 0;
  for (const auto& [u, v] : graph.edges()) {
    period = std::gcd(period, std::abs(level[u] + 1 - level[v]));
    if (period == 1) return true;
  }
  return period == 1;
}

}  // namespace cesrank

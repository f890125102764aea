#include "cesrank/solver.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace cesrank {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr int kOscillationWindow = 50;
constexpr int kMaxStepHalvings = 4;
constexpr std::size_t kResidualTail = 10;

// Newton refinement: tried every kNewtonInterval tatonnement steps on
// economies small enough for a dense n x n solve.
constexpr int kNewtonInterval = 25;
constexpr int kNewtonMaxSize = 600;
constexpr int kNewtonSteps = 50;
constexpr int kLineSearchHalvings = 30;
constexpr double kMaxLogStep = 2.0;
constexpr double kMinPriceFraction = 0.1;

struct NewtonOutcome {
  Vector pi;
  double residual;
  long steps = 0;
};

double max_norm(const Vector& v) { return v.cwiseAbs().maxCoeff(); }
double two_norm(const Vector& v) { return v.norm(); }

// Halves t from its initial value until trial_at(t), renormalized, lowers
// `merit` of the excess demand. Returns false if no trial improves.
template <typename Trial>
bool backtrack(const CesEconomy& economy, double t, Trial trial_at, double (*merit)(const Vector&),
               Vector& pi, Vector& z) {
  const double current = merit(z);
  for (int h = 0; h < kLineSearchHalvings; ++h, t *= 0.5) {
    Vector trial = trial_at(t);
    if (!(trial.array() > 0.0).all()) continue;
    trial /= trial.sum();
    Vector zt = excess_demand(economy, trial);
    if (!zt.allFinite()) continue;
    if (merit(zt) < current) {
      pi = std::move(trial);
      z = std::move(zt);
      return true;
    }
  }
  return false;
}

// Square Newton step in prices: the last clearing equation is implied by
// Walras' law and replaced by sum(dpi) = 0. No price may fall below
// kMinPriceFraction of its current value.
bool square_step(const CesEconomy& economy, const Matrix& jac, Vector& pi, Vector& z) {
  const int n = economy.size();
  Matrix a = jac;
  a.row(n - 1).setOnes();
  Vector b = -z;
  b(n - 1) = 0.0;
  const auto lu = a.fullPivLu();
  if (!lu.isInvertible()) return false;
  const Vector d = lu.solve(b);
  if (!d.allFinite()) return false;
  double t = 1.0;
  for (int j = 0; j < n; ++j)
    if (d(j) < 0.0) t = std::min(t, (1.0 - kMinPriceFraction) * pi(j) / -d(j));
  const Vector base = pi;
  return backtrack(economy, t, [&](double s) { Vector v = base + s * d; return v; }, max_norm,
                   pi, z);
}

// Least-squares step over all n equations in log prices, with pi . dy = 0
// pinning the homogeneity direction. A descent direction for ||z||_2 even
// far from a solution, where dropping an equation is not justified.
bool least_squares_step(const CesEconomy& economy, const Matrix& jac, Vector& pi, Vector& z) {
  const int n = economy.size();
  Matrix a(n + 1, n);
  a.topRows(n) = jac * pi.asDiagonal();
  a.row(n) = pi.transpose();
  Vector rhs = Vector::Zero(n + 1);
  rhs.head(n) = -z;
  const Vector dy = a.completeOrthogonalDecomposition().solve(rhs);
  if (!dy.allFinite() || max_norm(dy) == 0.0) return false;
  const Vector base = pi;
  return backtrack(
      economy, std::min(1.0, kMaxLogStep / max_norm(dy)),
      [&](double s) { Vector v = base.cwiseProduct((s * dy).array().exp().matrix()); return v; },
      two_norm, pi, z);
}

// Square Newton steps while they lower max |z|. When they stall and
// `polish` is set, continues on a copy with least-squares steps and keeps
// the result only if it reaches the tolerance: a partial least-squares
// descent can settle in a local minimum of |z| that is not an equilibrium.
NewtonOutcome newton_refine(const CesEconomy& economy, Vector pi, double residual,
                            double tolerance, bool polish) {
  NewtonOutcome out{pi, residual};
  Vector z = excess_demand(economy, pi);
  int step = 0;
  for (; step < kNewtonSteps && out.residual > tolerance; ++step) {
    if (!square_step(economy, excess_demand_jacobian(economy, pi), pi, z)) break;
    ++out.steps;
    out.pi = pi;
    out.residual = max_norm(z);
  }
  if (!polish || out.residual <= tolerance) return out;
  long extra = 0;
  for (; step < kNewtonSteps; ++step) {
    const Matrix jac = excess_demand_jacobian(economy, pi);
    if (!square_step(economy, jac, pi, z) && !least_squares_step(economy, jac, pi, z)) break;
    ++extra;
    if (max_norm(z) <= tolerance) {
      out.pi = pi;
      out.residual = max_norm(z);
      out.steps += extra;
      break;
    }
  }
  return out;
}

}  // namespace

std::string to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::automatic:
      return "auto";
    case SolverMethod::closed_form:
      return "closed_form";
    case SolverMethod::tatonnement:
      return "tatonnement";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("solver gamma must lie in (0, 1]");
  if (max_iters < 1) throw InvalidArgument("solver max_iters must be at least 1");
}

EquilibriumCheck verify_equilibrium(const CesEconomy& economy, const PriceVector& prices,
                                    double tolerance) {
  EquilibriumCheck check;
  check.excess = excess_demand(economy, prices.values());
  Eigen::Index worst = 0;
  check.residual = check.excess.cwiseAbs().maxCoeff(&worst);
  check.worst_good = static_cast<int>(worst);
  check.passed = check.residual <= tolerance;
  return check;
}

std::pair<PriceVector, SolverReport> solve_cobb_douglas(const CesEconomy& economy) {
  const auto start = Clock::now();
  if (!economy.all_cobb_douglas()) {
    throw InvalidArgument("closed-form solve needs every trader to be Cobb-Douglas (rho = 0)");
  }
  if (!economy.has_unit_endowments()) {
    throw InvalidArgument("closed-form solve supports unit endowments only");
  }
  require_strongly_connected(economy.economy_graph(), "Cobb-Douglas equilibrium");

  const int n = economy.size();
  // Trader i spends share s_ij of income pi_i on good j; good j clears when
  // sum_i s_ij pi_i = pi_j.
  Matrix shares = economy.alpha();
  for (int i = 0; i < n; ++i) shares.row(i) /= shares.row(i).sum();
  Matrix clearing = shares.transpose() - Matrix::Identity(n, n);
  clearing.row(0).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(0) = 1.0;
  Vector pi = clearing.colPivHouseholderQr().solve(rhs);
  if (!pi.allFinite() || (pi.array() <= 0.0).any()) {
    throw ConvergenceError("closed-form equilibrium is not strictly positive", pi, NAN);
  }
  PriceVector prices(pi / pi.sum());

  SolverReport report;
  report.iterations = 1;
  report.method = to_string(SolverMethod::closed_form);
  report.residual = verify_equilibrium(economy, prices, 0.0).residual;
  report.converged = true;
  report.wall_time_seconds = seconds_since(start);
  return {std::move(prices), report};
}

std::pair<PriceVector, SolverReport> solve_tatonnement(const CesEconomy& economy,
                                                       const SolverConfig& config) {
  const auto start = Clock::now();
  config.validate();
  require_strongly_connected(economy.economy_graph(), "tatonnement");
  const int n = economy.size();

  Vector pi = config.initial_prices ? PriceVector::normalized(*config.initial_prices).values()
                                    : PriceVector::uniform(n).values();
  const Vector supply = economy.supply();
  // Own-price elasticity of CES demand is about q = 1/(1-rho), so a raw
  // step gamma overshoots by a factor q on elastic goods. Scale it down.
  double max_q = 1.0;
  for (int i = 0; i < n; ++i) max_q = std::max(max_q, economy.demand_exponent(i));
  double gamma = config.gamma / max_q;
  int halvings = 0;
  double window_start_residual = std::numeric_limits<double>::infinity();
  std::vector<double> tail;
  tail.reserve(kResidualTail);
  double residual = std::numeric_limits<double>::infinity();
  const bool use_newton = n <= kNewtonMaxSize;
  long newton_steps = 0;
  long next_newton = kNewtonInterval;
  long polish_gap = kNewtonInterval;
  long next_polish = kNewtonInterval;

  for (long it = 0; it < config.max_iters; ++it) {
    const Vector demand = aggregate_demand(economy, pi);
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(demand(j))) {
        std::ostringstream msg;
        msg << "tatonnement produced a non-finite demand for good " << j << " at iteration "
            << it;
        throw ConvergenceError(msg.str(), pi, residual, tail);
      }
    }
    residual = (demand - supply).cwiseAbs().maxCoeff();
    if (tail.size() == kResidualTail) tail.erase(tail.begin());
    tail.push_back(residual);

    if (residual <= config.tolerance) {
      SolverReport report;
      report.iterations = it + newton_steps;
      report.residual = residual;
      report.converged = true;
      report.method = to_string(SolverMethod::tatonnement) + (newton_steps > 0 ? "+newton" : "");
      report.wall_time_seconds = seconds_since(start);
      return {PriceVector(pi), report};
    }

    if (use_newton && it == next_newton) {
      const bool polish = it >= next_polish;
      auto refined = newton_refine(economy, pi, residual, config.tolerance, polish);
      next_newton = it + kNewtonInterval;
      if (polish && refined.residual > config.tolerance) {
        polish_gap *= 2;
        next_polish = it + polish_gap;
      }
      if (refined.residual < residual) {
        newton_steps += refined.steps;
        pi = std::move(refined.pi);
        if (refined.residual <= config.tolerance) {
          SolverReport report;
          report.iterations = it + newton_steps;
          report.residual = refined.residual;
          report.converged = true;
          report.method = to_string(SolverMethod::tatonnement) + "+newton";
          report.wall_time_seconds = seconds_since(start);
          return {PriceVector(pi), report};
        }
        continue;
      }
    }

    if (it % kOscillationWindow == 0) {
      if (residual > window_start_residual && halvings < kMaxStepHalvings) {
        gamma *= 0.5;
        ++halvings;
        logger()->debug("tatonnement: residual grew to {:.3e} at iteration {}, gamma -> {}",
                        residual, it, gamma);
      }
      window_start_residual = residual;
    }

    for (int j = 0; j < n; ++j) pi(j) *= std::pow(demand(j) / supply(j), gamma);
    pi /= pi.sum();
    for (int j = 0; j < n; ++j) {
      if (!(pi(j) > 0.0)) {
        std::ostringstream msg;
        msg << "tatonnement drove the price of good " << j << " to zero at iteration " << it;
        throw ConvergenceError(msg.str(), pi, residual, tail);
      }
    }
  }

  std::ostringstream msg;
  msg << "tatonnement did not reach tolerance " << config.tolerance << " within "
      << config.max_iters << " iterations (residual " << residual << ", final gamma " << gamma
      << "); try a smaller gamma";
  throw ConvergenceError(msg.str(), pi, residual, tail);
}

std::pair<PriceVector, SolverReport> solve_equilibrium(const CesEconomy& economy,
                                                       const SolverConfig& config) {
  config.validate();
  SolverMethod method = config.method;
  if (method == SolverMethod::automatic) {
    method = economy.all_cobb_douglas() && economy.has_unit_endowments()
                 ? SolverMethod::closed_form
                 : SolverMethod::tatonnement;
  }
  auto result = method == SolverMethod::closed_form ? solve_cobb_douglas(economy)
                                                    : solve_tatonnement(economy, config);
  const auto check = verify_equilibrium(economy, result.first, config.tolerance);
  if (!check.passed) {
    std::ostringstream msg;
    msg << "equilibrium certificate failed: |z_" << check.worst_good << "| = " << check.residual
        << " exceeds tolerance " << config.tolerance;
    throw ConvergenceError(msg.str(), result.first.values(), check.residual);
  }
  result.second.residual = check.residual;
  return result;
}

SpreadReport multistart_probe(const CesEconomy& economy, const SolverConfig& config,
                              int starts) {
  if (starts < 1) throw InvalidArgument("multistart needs at least one start");
  const int n = economy.size();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> draw(0.05, 1.0);

  SpreadReport report;
  report.bound = 10.0 * config.tolerance;
  report.uniqueness_expected = (economy.rho().array() >= 0.0).all();
  for (int s = 0; s < starts; ++s) {
    Vector start(n);
    for (int j = 0; j < n; ++j) start(j) = draw(rng);
    SolverConfig run = config;
    run.method = SolverMethod::tatonnement;
    run.initial_prices = start;
    report.solutions.push_back(solve_equilibrium(economy, run).first.values());
  }
  for (std::size_t a = 0; a < report.solutions.size(); ++a) {
    for (std::size_t b = a + 1; b < report.solutions.size(); ++b) {
      report.max_spread = std::max(
          report.max_spread, (report.solutions[a] - report.solutions[b]).cwiseAbs().maxCoeff());
    }
  }
  report.within_bound = report.max_spread <= report.bound;
  return report;
}

RankingResult ces_ranking(const RankingProblem& problem, const SolverConfig& config) {
  const CesEconomy economy = build_economy(normalize_preferences(problem));
  auto [scores, report] = solve_equilibrium(economy, config);
  return RankingResult{std::move(scores), report};
}

std::vector<RankEntry> rank_order(const Vector& scores, double tie_tolerance) {
  const int n = static_cast<int>(scores.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores(a) != scores(b)) return scores(a) > scores(b);
    return a < b;
  });

  std::vector<RankEntry> entries;
  entries.reserve(n);
  int group = 0;
  std::size_t group_begin = 0;
  for (int k = 0; k < n; ++k) {
    const int agent = order[k];
    if (k > 0 && scores(entries[group_begin].agent) - scores(agent) > tie_tolerance) {
      std::sort(entries.begin() + static_cast<long>(group_begin), entries.end(),
                [](const RankEntry& a, const RankEntry& b) { return a.agent < b.agent; });
      ++group;
      group_begin = entries.size();
    }
    entries.push_back(RankEntry{0, agent, group, scores(agent)});
  }
  std::sort(entries.begin() + static_cast<long>(group_begin), entries.end(),
            [](const RankEntry& a, const RankEntry& b) { return a.agent < b.agent; });
  for (int k = 0; k < n; ++k) entries[k].position = k + 1;
  return entries;
}

}  // namespace cesrank

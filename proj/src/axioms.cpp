#include "cesrank/axioms.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace cesrank {

namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

AxiomVerdict not_applicable(std::string axiom, std::string why) {
  AxiomVerdict v;
  v.axiom = std::move(axiom);
  v.status = VerdictStatus::not_applicable;
  v.summary = std::move(why);
  return v;
}

}  // namespace

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::pass:
      return "pass";
    case VerdictStatus::fail:
      return "fail";
    case VerdictStatus::not_applicable:
      return "not_applicable";
  }
  return "unknown";
}

AxiomVerdict check_minimal_fairness(int n, double rho, double beta, const SolverConfig& config) {
  if (n < 2) throw InvalidArgument("minimal fairness needs at least two agents");
  const auto problem =
      RankingProblem::with_common_rho(RankingProblem::default_ids(n), Matrix::Zero(n, n), rho, beta);

  // Start away from the uniform vector so the solver has to find it.
  SolverConfig run = config;
  if (!run.initial_prices) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> draw(0.05, 1.0);
    Vector start(n);
    for (int j = 0; j < n; ++j) start(j) = draw(rng);
    run.initial_prices = start;
  }
  const auto result = ces_ranking(problem, run);
  const Vector& pi = result.scores.values();
  const double deviation = (pi.array() - 1.0 / n).abs().maxCoeff();

  AxiomVerdict v;
  v.axiom = "minimal_fairness";
  v.tolerances["uniform"] = kFairnessTolerance;
  v.tolerances["solver"] = config.tolerance;
  v.witness["prices"] = to_std(pi);
  v.witness["max_deviation"] = {deviation};
  v.status = deviation <= kFairnessTolerance ? VerdictStatus::pass : VerdictStatus::fail;
  std::ostringstream msg;
  msg << "all-zero preferences, n=" << n << ", rho=" << rho << ", beta=" << beta
      << ": max |pi_j - 1/n| = " << deviation;
  v.summary = msg.str();
  return v;
}

AxiomVerdict check_strict_monotonicity(const RankingProblem& problem, int i, int j,
                                       const SolverConfig& config) {
  const int n = problem.size();
  if (i < 0 || i >= n || j < 0 || j >= n) throw InvalidArgument("agent index out of range");
  if (i == j) return not_applicable("strict_monotonicity", "i == j admits no strict dominance");
  if (!problem.has_common_rho()) {
    return not_applicable("strict_monotonicity",
                          "agents do not share a common elasticity of substitution");
  }
  const NormalizedProblem normalized = normalize_preferences(problem);
  const Matrix& a = normalized.alpha_hat();
  bool strict = false;
  for (int p = 0; p < n; ++p) {
    if (a(p, i) > a(p, j)) {
      std::ostringstream msg;
      msg << "column " << i << " is not dominated by column " << j << " (row " << p << ")";
      return not_applicable("strict_monotonicity", msg.str());
    }
    strict = strict || a(p, i) < a(p, j);
  }
  if (!strict) {
    return not_applicable("strict_monotonicity", "columns are equal; no strict dominance");
  }

  const CesEconomy economy = build_economy(normalized);
  const auto [prices, report] = solve_equilibrium(economy, config);
  const double gap = prices[j] - prices[i];

  AxiomVerdict v;
  v.axiom = "strict_monotonicity";
  v.tolerances["margin"] = kStrictMargin;
  v.tolerances["solver"] = config.tolerance;
  v.witness["prices"] = to_std(prices.values());
  v.witness["pair"] = {static_cast<double>(i), static_cast<double>(j)};
  v.witness["gap"] = {gap};
  v.status = gap > kStrictMargin ? VerdictStatus::pass : VerdictStatus::fail;
  std::ostringstream msg;
  msg << "pi_" << j << " - pi_" << i << " = " << gap;
  v.summary = msg.str();
  return v;
}

AxiomVerdict check_invariance(const RankingProblem& problem, int i, double lambda,
                              const SolverConfig& config) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("reference intensity factor lambda must be positive");
  }
  if (i < 0 || i >= problem.size()) throw InvalidArgument("agent index out of range");
  const auto original = ces_ranking(problem, config);
  const auto scaled = ces_ranking(problem.with_scaled_row(i, lambda), config);
  const double diff =
      (original.scores.values() - scaled.scores.values()).cwiseAbs().maxCoeff();

  AxiomVerdict v;
  v.axiom = "invariance";
  v.tolerances["max_norm"] = kInvarianceTolerance;
  v.witness["original"] = to_std(original.scores.values());
  v.witness["scaled"] = to_std(scaled.scores.values());
  v.witness["difference"] = {diff};
  v.status = diff <= kInvarianceTolerance ? VerdictStatus::pass : VerdictStatus::fail;
  std::ostringstream msg;
  msg << "row " << i << " scaled by " << lambda << ": max |difference| = " << diff;
  v.summary = msg.str();
  return v;
}

AxiomVerdict check_uniformity(const RankingProblem& problem, const SolverConfig& config) {
  const RankingProblem undamped = problem.with_beta(1.0);
  const NormalizedProblem normalized = normalize_preferences(undamped);
  if (!is_regular(normalized)) {
    return not_applicable("uniformity", "problem is not regular");
  }
  const int n = problem.size();
  const CesEconomy economy = build_economy(normalized);
  const auto [prices, report] = solve_equilibrium(economy, config);
  const double deviation = (prices.values().array() - 1.0 / n).abs().maxCoeff();
  const auto at_uniform = verify_equilibrium(economy, PriceVector::uniform(n), config.tolerance);

  AxiomVerdict v;
  v.axiom = "uniformity";
  v.tolerances["uniform"] = kUniformityTolerance;
  v.tolerances["solver"] = config.tolerance;
  v.witness["prices"] = to_std(prices.values());
  v.witness["max_deviation"] = {deviation};
  v.witness["excess_at_uniform"] = to_std(at_uniform.excess);
  v.witness["residual"] = {report.residual};
  v.status = deviation <= kUniformityTolerance ? VerdictStatus::pass : VerdictStatus::fail;
  std::ostringstream msg;
  msg << (v.passed() ? "uniform" : "non-uniform") << " ranking on a regular problem: max |pi_j - 1/n| = "
      << deviation;
  v.summary = msg.str();
  return v;
}

AxiomVerdict gs_spot_check(const CesEconomy& economy, int good, double delta,
                           const std::vector<Vector>& probe_prices) {
  const int n = economy.size();
  if (good < 0 || good >= n) throw InvalidArgument("good index out of range");
  if (!(delta > 0.0)) throw InvalidArgument("gross-substitutes probe needs delta > 0");
  if (probe_prices.empty()) throw InvalidArgument("gross-substitutes probe needs a price vector");
  if ((economy.rho().array() < 0.0).any()) {
    return not_applicable("gross_substitutes", "gross substitutes only holds for rho >= 0");
  }
  if ((economy.alpha().array() <= 0.0).any()) {
    return not_applicable("gross_substitutes", "some utility coefficient is zero");
  }

  AxiomVerdict v;
  v.axiom = "gross_substitutes";
  v.tolerances["margin"] = kStrictMargin;
  double smallest_increase = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < probe_prices.size(); ++k) {
    const Vector& base = probe_prices[k];
    Vector raised = base;
    raised(good) += delta;
    const Vector before = excess_demand(economy, base);
    const Vector after = excess_demand(economy, raised);
    for (int j = 0; j < n; ++j) {
      if (j == good) continue;
      const double increase = after(j) - before(j);
      smallest_increase = std::min(smallest_increase, increase);
      if (!(increase > kStrictMargin)) {
        v.status = VerdictStatus::fail;
        v.witness["prices"] = to_std(base);
        v.witness["probe"] = {static_cast<double>(k)};
        v.witness["good"] = {static_cast<double>(j)};
        v.witness["excess_before"] = {before(j)};
        v.witness["excess_after"] = {after(j)};
        std::ostringstream msg;
        msg << "raising pi_" << good << " by " << delta << " changed z_" << j << " by "
            << increase;
        v.summary = msg.str();
        return v;
      }
    }
  }
  v.status = VerdictStatus::pass;
  v.witness["smallest_increase"] = {smallest_increase};
  std::ostringstream msg;
  msg << "raising pi_" << good << " by " << delta << " raised every other z_j at "
      << probe_prices.size() << " probes (smallest increase " << smallest_increase << ")";
  v.summary = msg.str();
  return v;
}

}  // namespace cesrank

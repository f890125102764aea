#pragma once

#include "cesrank/common.hpp"
#include "cesrank/economy.hpp"
#include "cesrank/problem.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cesrank {

enum class SolverMethod { automatic, closed_form, tatonnement };

std::string to_string(SolverMethod method);

struct SolverConfig {
  // `automatic` takes the closed form when every trader is Cobb-Douglas with
  // unit endowments, tatonnement otherwise.
  SolverMethod method = SolverMethod::automatic;
  // Bound on ||z(pi)||_inf.
  double tolerance = 1e-10;
  // Exponent of the multiplicative price update, in (0, 1].
  double gamma = 0.5;
  long max_iters = 200000;
  std::optional<Vector> initial_prices;
  std::uint64_t seed = 0;

  void validate() const;
};

// Equilibrium of an all-Cobb-Douglas economy with unit endowments. Market
// clearing reduces to sum_i s_ij pi_i = pi_j for the budget-share matrix s,
// solved directly as a linear system.
std::pair<PriceVector, SolverReport> solve_cobb_douglas(const CesEconomy& economy);

// Damped multiplicative tatonnement,
//   pi_j <- pi_j * (D_j(pi) / S_j)^gamma,  then rescaled onto the simplex.
// gamma is halved (at most four times) whenever the residual has grown over a
// 50-iteration window. For economies with some rho < 0 the equilibrium set
// need not be a singleton and the returned point may depend on the start.
std::pair<PriceVector, SolverReport> solve_tatonnement(const CesEconomy& economy,
                                                       const SolverConfig& config = {});

// Dispatches on config.method. The result is certified with
// verify_equilibrium before returning.
std::pair<PriceVector, SolverReport> solve_equilibrium(const CesEconomy& economy,
                                                       const SolverConfig& config = {});

struct EquilibriumCheck {
  Vector excess;  // z_j per good
  double residual = 0.0;
  int worst_good = 0;
  bool passed = false;
};

EquilibriumCheck verify_equilibrium(const CesEconomy& economy, const PriceVector& prices,
                                    double tolerance);

struct SpreadReport {
  std::vector<Vector> solutions;
  double max_spread = 0.0;  // max pairwise ||pi_a - pi_b||_inf
  double bound = 0.0;       // 10 x solver tolerance
  // Uniqueness is only guaranteed when every rho >= 0.
  bool uniqueness_expected = false;
  bool within_bound = false;
};

// Runs tatonnement from `starts` seeded random interior price vectors.
SpreadReport multistart_probe(const CesEconomy& economy, const SolverConfig& config,
                              int starts);

struct RankingResult {
  PriceVector scores;
  SolverReport report;
};

// Full CES ranking pipeline: normalize preferences, build the exchange
// economy, compute its equilibrium.
RankingResult ces_ranking(const RankingProblem& problem, const SolverConfig& config = {});

inline constexpr double kTieTolerance = 1e-9;

struct RankEntry {
  int position = 0;    // 1-based
  int agent = 0;
  int tie_group = 0;   // entries sharing a group are tied within kTieTolerance
  double score = 0.0;
};

// Descending by score; scores within kTieTolerance of the group's leading
// score form a tie group, ordered by agent index.
std::vector<RankEntry> rank_order(const Vector& scores, double tie_tolerance = kTieTolerance);

}  // namespace cesrank

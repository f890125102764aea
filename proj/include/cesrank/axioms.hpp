#pragma once

#include "cesrank/economy.hpp"
#include "cesrank/problem.hpp"
#include "cesrank/solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace cesrank {

enum class VerdictStatus { pass, fail, not_applicable };

std::string to_string(VerdictStatus status);

// Outcome of one executable axiom check. Failures always carry a witness.
struct AxiomVerdict {
  std::string axiom;
  VerdictStatus status = VerdictStatus::not_applicable;
  std::string summary;
  std::map<std::string, std::vector<double>> witness;
  std::map<std::string, double> tolerances;

  bool passed() const { return status == VerdictStatus::pass; }
  bool applicable() const { return status != VerdictStatus::not_applicable; }
};

inline constexpr double kFairnessTolerance = 1e-9;
inline constexpr double kStrictMargin = 1e-12;
inline constexpr double kInvarianceTolerance = 1e-8;
inline constexpr double kUniformityTolerance = 1e-6;

// All-zero preference matrix on n agents with common rho: the ranking must be
// uniform within kFairnessTolerance.
AxiomVerdict check_minimal_fairness(int n, double rho, double beta,
                                    const SolverConfig& config = {});

// If column i of alpha_hat is entrywise <= column j with one strict entry,
// agent i must score strictly below j. Not applicable unless rho is common
// and the dominance holds.
AxiomVerdict check_strict_monotonicity(const RankingProblem& problem, int i, int j,
                                       const SolverConfig& config = {});

// Scaling row i of alpha by lambda leaves the ranking unchanged.
AxiomVerdict check_invariance(const RankingProblem& problem, int i, double lambda,
                              const SolverConfig& config = {});

// On a regular problem (checked with beta forced to 1) reports whether the
// ranking is uniform. Status pass means uniform within kUniformityTolerance;
// fail means non-uniform, with the prices and max deviation as witness.
AxiomVerdict check_uniformity(const RankingProblem& problem, const SolverConfig& config = {});

// Gross-substitutes spot check: raising pi_l by delta strictly raises z_j for
// every j != l at each probe price vector. Applicable when every rho >= 0 and
// every alpha entry is positive.
AxiomVerdict gs_spot_check(const CesEconomy& economy, int good, double delta,
                           const std::vector<Vector>& probe_prices);

}  // namespace cesrank

#pragma once

#include "cesrank/common.hpp"

#include <string>
#include <vector>

namespace cesrank {

inline constexpr double kDefaultBeta = 0.85;

// Nonzero elasticity parameters closer to zero than this are rejected; the
// Cobb-Douglas limit must be requested with an exact 0.
inline constexpr double kRhoSentinelGuard = 1e-9;

inline constexpr double kRegularityTolerance = 1e-9;

// Throws InvalidArgument unless rho lies in [-1, 1) and is either exactly 0
// or at least kRhoSentinelGuard away from it. `what` names the value in the
// error message.
void validate_rho(double rho, const std::string& what);

// A ranking problem: agents, preference intensities alpha(i, j) of agent i
// for agent j, per-agent CES elasticity parameter rho, and damping weight
// beta. Immutable once constructed.
class RankingProblem {
 public:
  RankingProblem(std::vector<std::string> agent_ids, Matrix alpha, Vector rho,
                 double beta = kDefaultBeta);

  // Same problem with every agent sharing one rho.
  static RankingProblem with_common_rho(std::vector<std::string> agent_ids, Matrix alpha,
                                        double rho, double beta = kDefaultBeta);

  // Agents named "0", "1", ... .
  static std::vector<std::string> default_ids(int n);

  int size() const { return static_cast<int>(agent_ids_.size()); }
  const std::vector<std::string>& agent_ids() const { return agent_ids_; }
  const Matrix& alpha() const { return alpha_; }
  const Vector& rho() const { return rho_; }
  double beta() const { return beta_; }

  bool has_common_rho() const;

  RankingProblem with_beta(double beta) const;
  RankingProblem with_rho(const Vector& rho) const;
  // Row `row` of alpha multiplied by `factor`.
  RankingProblem with_scaled_row(int row, double factor) const;

  friend bool operator==(const RankingProblem& a, const RankingProblem& b);

 private:
  std::vector<std::string> agent_ids_;
  Matrix alpha_;
  Vector rho_;
  double beta_;
};

// Output of normalize_preferences: every row of alpha_hat is a probability
// vector, strictly positive whenever beta < 1.
class NormalizedProblem {
 public:
  NormalizedProblem(std::vector<std::string> agent_ids, Matrix alpha_hat, Vector rho,
                    double beta);

  int size() const { return static_cast<int>(agent_ids_.size()); }
  const std::vector<std::string>& agent_ids() const { return agent_ids_; }
  const Matrix& alpha_hat() const { return alpha_hat_; }
  const Vector& rho() const { return rho_; }
  // Damping that produced alpha_hat.
  double beta() const { return beta_; }

 private:
  std::vector<std::string> agent_ids_;
  Matrix alpha_hat_;
  Vector rho_;
  double beta_;
};

// Preprocessing of the CES ranking pipeline: all-zero rows become uniform,
// rows are scaled to sum to one, then every entry is mixed with the uniform
// distribution, a_ij * beta + (1 - beta) / n.
NormalizedProblem normalize_preferences(const RankingProblem& problem);

// True iff all row sums agree and all column sums agree within `tolerance`.
bool is_regular(const NormalizedProblem& problem, double tolerance = kRegularityTolerance);
bool is_regular(const Matrix& alpha, double tolerance = kRegularityTolerance);

}  // namespace cesrank

#pragma once

#include "cesrank/common.hpp"
#include "cesrank/markov.hpp"
#include "cesrank/problem.hpp"

namespace cesrank {

// Upper bound on rho accepted by CesEconomy; keeps the exponent 1/(1-rho) at
// most 20.
inline constexpr double kMaxEconomyRho = 0.95;

// Demand evaluation switches to log space once 1/(1-rho) exceeds this.
inline constexpr double kLogSpaceExponent = 4.0;

// Strictly positive price vector on the simplex.
class PriceVector {
 public:
  explicit PriceVector(Vector pi);

  static PriceVector uniform(int n);
  // Scales positive prices onto the simplex.
  static PriceVector normalized(const Vector& positive);

  int size() const { return static_cast<int>(pi_.size()); }
  const Vector& values() const { return pi_; }
  double operator[](int j) const { return pi_(j); }

 private:
  Vector pi_;
};

// Exchange economy with n traders and n goods. Trader i has CES utility
// (sum_j alpha(i, j) x_j^rho_i)^(1/rho_i), or Cobb-Douglas utility with
// exponents alpha(i, .) when rho_i == 0, and endowment row w(i, .).
class CesEconomy {
 public:
  CesEconomy(Matrix alpha, Vector rho, Matrix endowments);

  // Identity endowments: trader i owns one unit of good i.
  static CesEconomy with_unit_endowments(Matrix alpha, Vector rho);

  int size() const { return static_cast<int>(alpha_.rows()); }
  const Matrix& alpha() const { return alpha_; }
  const Vector& rho() const { return rho_; }
  const Matrix& endowments() const { return w_; }

  // 1/(1-rho_i) and -rho_i/(1-rho_i).
  double demand_exponent(int i) const { return q_(i); }
  double price_exponent(int i) const { return r_(i); }

  bool is_cobb_douglas(int i) const { return rho_(i) == 0.0; }
  bool all_cobb_douglas() const { return (rho_.array() == 0.0).all(); }
  bool has_unit_endowments() const;
  // sum_i w(i, j).
  Vector supply() const { return w_.colwise().sum().transpose(); }

  // Edge i -> j iff alpha(i, j) > 0.
  DirectedGraph economy_graph() const { return DirectedGraph::from_support(alpha_); }

 private:
  Matrix alpha_;
  Vector rho_;
  Matrix w_;
  Vector q_;
  Vector r_;
};

// Trader i's utility-maximizing bundle. Prices must be strictly positive but
// need not lie on the simplex. Routes rho_i == 0 to cobb_douglas_demand.
Vector ces_demand(const CesEconomy& economy, int trader, const Vector& prices);

// Closed-form Cobb-Douglas demand: budget share alpha(i, j) / sum_k alpha(i, k)
// spent on good j.
Vector cobb_douglas_demand(const CesEconomy& economy, int trader, const Vector& prices);

// The explicit CES demand formula for one trader, evaluated for any nonzero
// rho without the sentinel guard or the economy-level rho cap. Used to probe
// the Cobb-Douglas limit.
Vector ces_demand_formula(const Vector& alpha_row, double rho, const Vector& prices,
                          double income);

// z_j = sum_i x_ij - sum_i w_ij, summed over traders in index order.
Vector excess_demand(const CesEconomy& economy, const Vector& prices);

// Fraction of trader i's income spent on each good.
Vector budget_shares(const CesEconomy& economy, int trader, const Vector& prices);

// d z_j / d pi_l at the given (positive, not necessarily normalized) prices.
Matrix excess_demand_jacobian(const CesEconomy& economy, const Vector& prices);

// Aggregate demand sum_i x_ij.
Vector aggregate_demand(const CesEconomy& economy, const Vector& prices);

// Markov chain to Cobb-Douglas market: alpha = P, rho = 0, w = I. The state
// graph must be strongly connected; periodic chains are accepted with a
// logged warning.
CesEconomy markov_to_economy(const TransitionMatrix& p);

// Economy of the CES ranking pipeline: alpha = alpha_hat, rho copied, w = I.
// Throws NotStronglyConnected when the economy graph is reducible, which can
// only happen for beta == 1.
CesEconomy build_economy(const NormalizedProblem& normalized);

}  // namespace cesrank

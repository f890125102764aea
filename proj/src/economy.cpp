#include "cesrank/economy.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cesrank {

namespace {

void check_prices(const Vector& prices, Eigen::Index n) {
  if (prices.size() != n) {
    throw InvalidArgument("price vector has " + std::to_string(prices.size()) +
                          " entries, expected " + std::to_string(n));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(prices(j) > 0.0) || !std::isfinite(prices(j))) {
      std::ostringstream msg;
      msg << "price of good " << j << " is " << prices(j) << "; prices must be strictly positive";
      throw InvalidArgument(msg.str());
    }
  }
}

}  // namespace

PriceVector::PriceVector(Vector pi) : pi_(std::move(pi)) {
  if (pi_.size() < 1) throw InvalidArgument("a price vector needs at least one entry");
  check_prices(pi_, pi_.size());
  if (std::abs(pi_.sum() - 1.0) > 1e-10) {
    throw InvalidArgument("price vector must lie on the simplex (sum to 1)");
  }
}

PriceVector PriceVector::uniform(int n) {
  return PriceVector(Vector::Constant(n, 1.0 / n));
}

PriceVector PriceVector::normalized(const Vector& positive) {
  check_prices(positive, positive.size());
  return PriceVector(positive / positive.sum());
}

CesEconomy::CesEconomy(Matrix alpha, Vector rho, Matrix endowments)
    : alpha_(std::move(alpha)), rho_(std::move(rho)), w_(std::move(endowments)) {
  const Eigen::Index n = alpha_.rows();
  if (n < 1 || alpha_.cols() != n || rho_.size() != n || w_.rows() != n || w_.cols() != n) {
    throw InvalidArgument("economy needs an n x n alpha, n rho values and an n x n endowment");
  }
  q_.resize(n);
  r_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string label = "rho[" + std::to_string(i) + "]";
    validate_rho(rho_(i), label);
    if (rho_(i) > kMaxEconomyRho) {
      std::ostringstream msg;
      msg << label << " = " << rho_(i) << " exceeds the supported maximum " << kMaxEconomyRho;
      throw InvalidArgument(msg.str());
    }
    q_(i) = 1.0 / (1.0 - rho_(i));
    r_(i) = -rho_(i) / (1.0 - rho_(i));
    bool any_positive = false;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(alpha_(i, j)) || alpha_(i, j) < 0.0) {
        throw InvalidArgument("alpha(" + std::to_string(i) + ", " + std::to_string(j) +
                              ") must be finite and nonnegative");
      }
      if (!std::isfinite(w_(i, j)) || w_(i, j) < 0.0) {
        throw InvalidArgument("endowment w(" + std::to_string(i) + ", " + std::to_string(j) +
                              ") must be finite and nonnegative");
      }
      any_positive = any_positive || alpha_(i, j) > 0.0;
    }
    if (!any_positive) {
      throw InvalidArgument("trader " + std::to_string(i) + " has no positive utility coefficient");
    }
  }
  const Vector total = supply();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(total(j) > 0.0)) {
      throw InvalidArgument("good " + std::to_string(j) + " has zero total supply");
    }
  }
}

CesEconomy CesEconomy::with_unit_endowments(Matrix alpha, Vector rho) {
  const Eigen::Index n = alpha.rows();
  return CesEconomy(std::move(alpha), std::move(rho), Matrix::Identity(n, n));
}

bool CesEconomy::has_unit_endowments() const {
  return w_ == Matrix::Identity(w_.rows(), w_.cols());
}

Vector ces_demand_formula(const Vector& alpha_row, double rho, const Vector& prices,
                          double income) {
  const Eigen::Index n = alpha_row.size();
  check_prices(prices, n);
  if (rho == 0.0 || !(rho < 1.0)) {
    throw InvalidArgument("the CES demand formula needs rho < 1 and rho != 0");
  }
  Vector x = Vector::Zero(n);
  if (income == 0.0) return x;

  const double q = 1.0 / (1.0 - rho);
  const double r = -rho / (1.0 - rho);
  // x_j = income * s_j / pi_j with budget shares
  // s_j = alpha_j^q pi_j^r / sum_k alpha_k^q pi_k^r.
  if (q > kLogSpaceExponent) {
    Vector t = Vector::Constant(n, -std::numeric_limits<double>::infinity());
    double peak = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < n; ++k) {
      if (alpha_row(k) > 0.0) {
        t(k) = q * std::log(alpha_row(k)) + r * std::log(prices(k));
        peak = std::max(peak, t(k));
      }
    }
    double total = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (alpha_row(k) > 0.0) total += std::exp(t(k) - peak);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (alpha_row(j) > 0.0) x(j) = income * (std::exp(t(j) - peak) / total) / prices(j);
    }
    return x;
  }

  Vector weight = Vector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (alpha_row(k) > 0.0) weight(k) = std::pow(alpha_row(k), q) * std::pow(prices(k), r);
  }
  const double total = weight.sum();
  for (Eigen::Index j = 0; j < n; ++j) x(j) = income * (weight(j) / total) / prices(j);
  return x;
}

Vector cobb_douglas_demand(const CesEconomy& economy, int trader, const Vector& prices) {
  const int n = economy.size();
  if (trader < 0 || trader >= n) throw InvalidArgument("trader index out of range");
  if (!economy.is_cobb_douglas(trader)) {
    throw InvalidArgument("trader " + std::to_string(trader) + " is not Cobb-Douglas");
  }
  check_prices(prices, n);
  const double income = economy.endowments().row(trader).dot(prices);
  const auto alpha = economy.alpha().row(trader);
  const double total = alpha.sum();
  Vector x(n);
  for (int j = 0; j < n; ++j) x(j) = income * (alpha(j) / total) / prices(j);
  return x;
}

Vector ces_demand(const CesEconomy& economy, int trader, const Vector& prices) {
  const int n = economy.size();
  if (trader < 0 || trader >= n) throw InvalidArgument("trader index out of range");
  if (economy.is_cobb_douglas(trader)) return cobb_douglas_demand(economy, trader, prices);
  check_prices(prices, n);
  const double income = economy.endowments().row(trader).dot(prices);
  return ces_demand_formula(economy.alpha().row(trader).transpose(), economy.rho()(trader),
                            prices, income);
}

Vector aggregate_demand(const CesEconomy& economy, const Vector& prices) {
  const int n = economy.size();
  check_prices(prices, n);
  Vector total = Vector::Zero(n);
  for (int i = 0; i < n; ++i) total += ces_demand(economy, i, prices);
  return total;
}

Vector excess_demand(const CesEconomy& economy, const Vector& prices) {
  return aggregate_demand(economy, prices) - economy.supply();
}

Vector budget_shares(const CesEconomy& economy, int trader, const Vector& prices) {
  const int n = economy.size();
  if (trader < 0 || trader >= n) throw InvalidArgument("trader index out of range");
  check_prices(prices, n);
  const auto alpha = economy.alpha().row(trader);
  if (economy.is_cobb_douglas(trader)) return alpha.transpose() / alpha.sum();
  Vector s = Vector::Zero(n);
  const double q = economy.demand_exponent(trader);
  const double r = economy.price_exponent(trader);
  double peak = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    if (alpha(k) > 0.0) {
      s(k) = q * std::log(alpha(k)) + r * std::log(prices(k));
      peak = std::max(peak, s(k));
    }
  }
  for (int k = 0; k < n; ++k) s(k) = alpha(k) > 0.0 ? std::exp(s(k) - peak) : 0.0;
  return s / s.sum();
}

Matrix excess_demand_jacobian(const CesEconomy& economy, const Vector& prices) {
  // x_ij = I_i s_ij / pi_j with I_i = w_i . pi and
  // d s_ij / d pi_l = r_i s_ij (delta_jl - s_il) / pi_l.
  const int n = economy.size();
  check_prices(prices, n);
  const Vector inv = prices.cwiseInverse();
  Matrix jac = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Vector s = budget_shares(economy, i, prices);
    const double income = economy.endowments().row(i).dot(prices);
    const Vector s_over_pi = s.cwiseProduct(inv);
    jac.noalias() += s_over_pi * economy.endowments().row(i);
    const double r = economy.price_exponent(i);
    if (r != 0.0) {
      jac.noalias() -= (r * income) * s_over_pi * s_over_pi.transpose();
      jac.diagonal() += (r * income) * s_over_pi.cwiseProduct(inv);
    }
    jac.diagonal() -= income * s_over_pi.cwiseProduct(inv);
  }
  return jac;
}

CesEconomy markov_to_economy(const TransitionMatrix& p) {
  const DirectedGraph graph = p.state_graph();
  require_strongly_connected(graph, "Markov chain to economy");
  if (!is_aperiodic(graph)) {
    logger()->warn(
        "Markov chain is irreducible but periodic; its invariant distribution still clears "
        "the reduced market");
  }
  return CesEconomy::with_unit_endowments(p.matrix(), Vector::Zero(p.size()));
}

CesEconomy build_economy(const NormalizedProblem& normalized) {
  CesEconomy economy =
      CesEconomy::with_unit_endowments(normalized.alpha_hat(), normalized.rho());
  require_strongly_connected(economy.economy_graph(), "CES ranking economy");
  return economy;
}

}  // namespace cesrank

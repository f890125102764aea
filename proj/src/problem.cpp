#include "cesrank/problem.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace cesrank {

namespace {

void validate_alpha(const Matrix& alpha) {
  for (Eigen::Index i = 0; i < alpha.rows(); ++i) {
    for (Eigen::Index j = 0; j < alpha.cols(); ++j) {
      const double a = alpha(i, j);
      if (!std::isfinite(a) || a < 0.0) {
        std::ostringstream msg;
        msg << "alpha(" << i << ", " << j << ") = " << a << " must be finite and nonnegative";
        throw InvalidArgument(msg.str());
      }
    }
  }
}

void validate_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw InvalidArgument("beta = " + std::to_string(beta) + " must lie in (0, 1]");
  }
}

}  // namespace

void validate_rho(double rho, const std::string& what) {
  if (!std::isfinite(rho) || rho < -1.0 || rho >= 1.0) {
    std::ostringstream msg;
    msg << what << " = " << rho << " must lie in [-1, 1)";
    throw InvalidArgument(msg.str());
  }
  if (rho != 0.0 && std::abs(rho) < kRhoSentinelGuard) {
    std::ostringstream msg;
    msg << what << " = " << rho
        << " is too close to zero; use exactly 0 for the Cobb-Douglas limit";
    throw InvalidArgument(msg.str());
  }
}

RankingProblem::RankingProblem(std::vector<std::string> agent_ids, Matrix alpha, Vector rho,
                               double beta)
    : agent_ids_(std::move(agent_ids)), alpha_(std::move(alpha)), rho_(std::move(rho)),
      beta_(beta) {
  const auto n = static_cast<Eigen::Index>(agent_ids_.size());
  if (n < 1) throw InvalidArgument("a ranking problem needs at least one agent");
  std::set<std::string> seen;
  for (const auto& id : agent_ids_) {
    if (!seen.insert(id).second) throw InvalidArgument("duplicate agent id '" + id + "'");
  }
  if (alpha_.rows() != n || alpha_.cols() != n) {
    std::ostringstream msg;
    msg << "alpha is " << alpha_.rows() << "x" << alpha_.cols() << " but there are " << n
        << " agents";
    throw InvalidArgument(msg.str());
  }
  if (rho_.size() != n) {
    throw InvalidArgument("rho has " + std::to_string(rho_.size()) + " entries, expected " +
                          std::to_string(n));
  }
  validate_alpha(alpha_);
  for (Eigen::Index i = 0; i < n; ++i) validate_rho(rho_(i), "rho[" + std::to_string(i) + "]");
  validate_beta(beta_);
}

RankingProblem RankingProblem::with_common_rho(std::vector<std::string> agent_ids,
                                               Matrix alpha, double rho, double beta) {
  const auto n = static_cast<Eigen::Index>(agent_ids.size());
  return RankingProblem(std::move(agent_ids), std::move(alpha), Vector::Constant(n, rho), beta);
}

std::vector<std::string> RankingProblem::default_ids(int n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (int i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

bool RankingProblem::has_common_rho() const {
  return (rho_.array() == rho_(0)).all();
}

RankingProblem RankingProblem::with_beta(double beta) const {
  return RankingProblem(agent_ids_, alpha_, rho_, beta);
}

RankingProblem RankingProblem::with_rho(const Vector& rho) const {
  return RankingProblem(agent_ids_, alpha_, rho, beta_);
}

RankingProblem RankingProblem::with_scaled_row(int row, double factor) const {
  if (row < 0 || row >= size()) throw InvalidArgument("row index out of range");
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw InvalidArgument("row scale factor must be positive and finite");
  }
  Matrix scaled = alpha_;
  scaled.row(row) *= factor;
  return RankingProblem(agent_ids_, std::move(scaled), rho_, beta_);
}

bool operator==(const RankingProblem& a, const RankingProblem& b) {
  return a.agent_ids_ == b.agent_ids_ && a.beta_ == b.beta_ && a.rho_.size() == b.rho_.size() &&
         a.rho_ == b.rho_ && a.alpha_.rows() == b.alpha_.rows() &&
         a.alpha_.cols() == b.alpha_.cols() && a.alpha_ == b.alpha_;
}

NormalizedProblem::NormalizedProblem(std::vector<std::string> agent_ids, Matrix alpha_hat,
                                     Vector rho, double beta)
    : agent_ids_(std::move(agent_ids)), alpha_hat_(std::move(alpha_hat)), rho_(std::move(rho)),
      beta_(beta) {
  const auto n = static_cast<Eigen::Index>(agent_ids_.size());
  if (n < 1 || alpha_hat_.rows() != n || alpha_hat_.cols() != n || rho_.size() != n) {
    throw InvalidArgument("normalized problem dimensions do not match the agent count");
  }
  validate_alpha(alpha_hat_);
  validate_beta(beta_);
  for (Eigen::Index i = 0; i < n; ++i) {
    validate_rho(rho_(i), "rho[" + std::to_string(i) + "]");
    const double sum = alpha_hat_.row(i).sum();
    if (std::abs(sum - 1.0) > 1e-12) {
      throw InvalidArgument("row " + std::to_string(i) + " of alpha_hat does not sum to 1");
    }
  }
}

NormalizedProblem normalize_preferences(const RankingProblem& problem) {
  const Eigen::Index n = problem.size();
  const double uniform = 1.0 / static_cast<double>(n);
  const double beta = problem.beta();
  Matrix alpha_hat(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sum = problem.alpha().row(i).sum();
    if (!std::isfinite(sum)) {
      throw InvalidArgument("row " + std::to_string(i) + " of alpha overflows when summed");
    }
    if (sum == 0.0) {
      alpha_hat.row(i).setConstant(uniform);
    } else {
      alpha_hat.row(i) = problem.alpha().row(i) / sum;
    }
    alpha_hat.row(i) = alpha_hat.row(i).array() * beta + uniform * (1.0 - beta);
    // Remove the last few ulps of drift so rows are probability vectors.
    alpha_hat.row(i) /= alpha_hat.row(i).sum();
  }
  return NormalizedProblem(problem.agent_ids(), std::move(alpha_hat), problem.rho(), beta);
}

bool is_regular(const Matrix& alpha, double tolerance) {
  if (alpha.rows() != alpha.cols() || alpha.rows() == 0) return false;
  const Vector rows = alpha.rowwise().sum();
  const Vector cols = alpha.colwise().sum().transpose();
  return (rows.maxCoeff() - rows.minCoeff()) <= tolerance &&
         (cols.maxCoeff() - cols.minCoeff()) <= tolerance;
}

bool is_regular(const NormalizedProblem& problem, double tolerance) {
  return is_regular(problem.alpha_hat(), tolerance);
}

}  // namespace cesrank

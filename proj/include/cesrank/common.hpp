#pragma once

#include <Eigen/Dense>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace spdlog {
class logger;
}

namespace cesrank {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a documented precondition or type invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed input document. `location` is "line N" for line-oriented
// formats and a JSON pointer for structured documents.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& message)
      : Error(location + ": " + message), location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

// A graph that must be strongly connected is not. Carries the component
// label of every vertex as the witness.
class NotStronglyConnected : public Error {
 public:
  NotStronglyConnected(const std::string& message, std::vector<int> component)
      : Error(message), component_(std::move(component)) {}

  const std::vector<int>& component() const noexcept { return component_; }

 private:
  std::vector<int> component_;
};

// An iterative method stopped without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, Vector last_iterate, double residual,
                   std::vector<double> residual_tail = {})
      : Error(message),
        last_iterate_(std::move(last_iterate)),
        residual_(residual),
        residual_tail_(std::move(residual_tail)) {}

  const Vector& last_iterate() const noexcept { return last_iterate_; }
  double residual() const noexcept { return residual_; }
  const std::vector<double>& residual_tail() const noexcept { return residual_tail_; }

 private:
  Vector last_iterate_;
  double residual_;
  std::vector<double> residual_tail_;
};

// Convergence diagnostics shared by every fixed-point and equilibrium method.
struct SolverReport {
  long iterations = 0;
  double residual = 0.0;  // method-specific; max-norm excess demand for equilibria
  bool converged = false;
  std::string method;
  double wall_time_seconds = 0.0;
};

// Library logger (writes to stderr). The level is taken from the RANK_LOG
// environment variable on first use: off, error, warn (default), info, debug.
std::shared_ptr<spdlog::logger> logger();

}  // namespace cesrank

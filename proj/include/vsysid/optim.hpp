#pragma once

#include <functional>

#include <Eigen/Core>

namespace vsysid {

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Central differences with per-coordinate step fd_step * max(|x_i|, 1).
/// A coordinate whose probe on one side is non-finite falls back to the
/// one-sided difference; throws Error(Domain) when both sides are non-finite.
Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x, double fd_step);

struct BfgsOptions {
  int max_iters = 200;
  double grad_tol = 1e-8;
  double fd_step = 1e-6;
  double armijo_c1 = 1e-4;
  int max_backtracks = 50;
  double curvature_eps = 1e-12;
  /// Largest infinity-norm move of the first trial step, relative to
  /// max(1, |x0|_inf); later steps are scaled by the curvature estimate.
  double initial_step = 0.1;
  /// Optional box; trial points are projected onto it.
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

enum class BfgsStatus { GradientTolerance, MaxIterations, LineSearchFailed };

struct BfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  BfgsStatus status = BfgsStatus::MaxIterations;

  bool converged() const noexcept { return status == BfgsStatus::GradientTolerance; }
};

/// Quasi-Newton minimisation with finite-difference gradients, inverse-Hessian
/// BFGS updates and a halving Armijo backtracking line search. When a box is
/// given, trial points are projected onto it. The returned value never
/// exceeds f(x0); on line-search failure the best point so far is returned.
BfgsResult bfgs_minimize(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& opts = {});

}  // namespace vsysid

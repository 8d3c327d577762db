#include "vsysid/optim.hpp"

#include <cmath>
#include <string>

#include "vsysid/error.hpp"

namespace vsysid {

namespace {

Eigen::VectorXd gradient_counted(const Objective& f, const Eigen::VectorXd& x, double fd_step,
                                 double fx, int& evals) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd g(n);
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = fd_step * std::max(std::abs(x[i]), 1.0);
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    evals += 2;
    const bool ok_p = std::isfinite(fp);
    const bool ok_m = std::isfinite(fm);
    if (ok_p && ok_m) {
      g[i] = (fp - fm) / (2.0 * h);
    } else if (ok_p && std::isfinite(fx)) {
      g[i] = (fp - fx) / h;
    } else if (ok_m && std::isfinite(fx)) {
      g[i] = (fx - fm) / h;
    } else {
      throw Error(ErrorCode::Domain,
                  "objective is non-finite on both sides of coordinate " + std::to_string(i));
    }
  }
  return g;
}

Eigen::VectorXd project_box(Eigen::VectorXd x, const BfgsOptions& opts) {
  if (opts.lower.size() == x.size()) x = x.cwiseMax(opts.lower);
  if (opts.upper.size() == x.size()) x = x.cwiseMin(opts.upper);
  return x;
}

}  // namespace

Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x, double fd_step) {
  int evals = 0;
  return gradient_counted(f, x, fd_step, f(x), evals);
}

BfgsResult bfgs_minimize(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& opts) {
  const Eigen::Index n = x0.size();
  BfgsResult res;
  res.x = project_box(x0, opts);
  res.f = f(res.x);
  res.evaluations = 1;
  if (!std::isfinite(res.f)) throw Error(ErrorCode::Domain, "objective is not finite at the start point");
  if (n == 0) {
    res.status = BfgsStatus::GradientTolerance;
    return res;
  }

  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  Eigen::VectorXd g = gradient_counted(f, res.x, opts.fd_step, res.f, res.evaluations);

  for (res.iterations = 0; res.iterations < opts.max_iters; ++res.iterations) {
    if (g.norm() <= opts.grad_tol) {
      res.status = BfgsStatus::GradientTolerance;
      return res;
    }
    Eigen::VectorXd dir = -hinv * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      // lost descent; restart from steepest descent
      hinv.setIdentity();
      scaled = false;
      dir = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    if (!scaled) {
      const double limit = opts.initial_step * std::max(1.0, res.x.lpNorm<Eigen::Infinity>());
      const double len = dir.lpNorm<Eigen::Infinity>();
      if (len > limit) step = limit / len;
    }
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      x_new = project_box(res.x + step * dir, opts);
      f_new = f(x_new);
      ++res.evaluations;
      // Armijo on the projected step so the box does not break sufficient decrease
      const double decrease = g.dot(x_new - res.x);
      if (std::isfinite(f_new) && f_new <= res.f + opts.armijo_c1 * std::min(decrease, 0.0) &&
          f_new < res.f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || !(f_new <= res.f)) {
      res.status = BfgsStatus::LineSearchFailed;
      return res;
    }

    const Eigen::VectorXd g_new = gradient_counted(f, x_new, opts.fd_step, f_new, res.evaluations);
    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = g_new - g;
    res.x = x_new;
    res.f = f_new;
    g = g_new;

    const double ys = y.dot(s);
    if (ys > opts.curvature_eps) {
      if (!scaled) {
        // Shanno-Phua scaling of the initial inverse Hessian
        hinv *= ys / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / ys;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
      hinv = (eye - rho * s * y.transpose()) * hinv * (eye - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
  }
  res.status = g.norm() <= opts.grad_tol ? BfgsStatus::GradientTolerance : BfgsStatus::MaxIterations;
  return res;
}

}  // namespace vsysid

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace mereology::detail {

struct LmOptions {
  int max_iterations = 400;
  double residual_tol = 1e-13;  // stop once |r| <= residual_tol
  double step_tol = 1e-16;
  double initial_damping = 1e-3;
  double fd_step = 1e-7;
};

struct LmResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Levenberg-Marquardt with a central-difference Jacobian. Works for
/// under-determined systems as well (damping keeps J^T J + mu I invertible).
template <class Residual>
LmResult levenberg_marquardt(Residual&& residual, Eigen::VectorXd x, const LmOptions& opt) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  VectorXd r = residual(x);
  double cost = r.squaredNorm();
  double mu = opt.initial_damping;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    if (std::sqrt(cost) <= opt.residual_tol) break;
    MatrixXd jac(r.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double h = opt.fd_step * std::max(1.0, std::abs(x(j)));
      VectorXd xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      jac.col(j) = (residual(xp) - residual(xm)) / (2.0 * h);
    }
    const MatrixXd jtj = jac.transpose() * jac;
    const VectorXd jtr = jac.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      MatrixXd damped = jtj;
      damped.diagonal().array() += mu * (1.0 + jtj.diagonal().array());
      const VectorXd step = damped.ldlt().solve(-jtr);
      const VectorXd trial = x + step;
      const VectorXd r_trial = residual(trial);
      const double trial_cost = r_trial.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        x = trial;
        r = r_trial;
        const bool tiny = step.norm() <= opt.step_tol * (1.0 + x.norm());
        cost = trial_cost;
        mu = std::max(mu / 3.0, 1e-15);
        improved = !tiny;
        break;
      }
      mu *= 4.0;
    }
    if (!improved) break;
  }
  return {x, std::sqrt(cost), it};
}

}  // namespace mereology::detail

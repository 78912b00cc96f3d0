#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <limits>

namespace mereology::detail {

struct LbfgsOptions {
  int max_iterations = 500;
  int memory = 8;
  double value_tol = 0.0;       // stop once f <= value_tol
  double gradient_tol = 1e-14;  // stop once |g| <= gradient_tol
  double armijo = 1e-4;
  int max_backtracks = 50;
};

template <class Point>
struct LbfgsResult {
  Point point;
  double value = 0.0;
  int iterations = 0;
};

/// Limited-memory BFGS over a space with a retraction. Gradients are expressed
/// in a fixed frame (left-trivialized coordinates on a Lie group, plain
/// coordinates on R^n), and curvature pairs are carried over unchanged.
///
///   eval(point, grad) -> value, fills grad
///   retract(point, step) -> new point
///   on_accept(iteration, point, value) is called after each accepted step.
template <class Point, class Eval, class Retract, class OnAccept>
LbfgsResult<Point> minimize_lbfgs(Point x, Eval&& eval, Retract&& retract, const LbfgsOptions& opt,
                                  OnAccept&& on_accept) {
  using Eigen::VectorXd;
  VectorXd g;
  double f = eval(x, g);
  std::deque<VectorXd> s_hist;
  std::deque<VectorXd> y_hist;
  LbfgsResult<Point> out{x, f, 0};
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (f <= opt.value_tol || g.norm() <= opt.gradient_tol) break;

    // two-loop recursion
    VectorXd q = g;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = s_hist[k].dot(q) / y_hist[k].dot(s_hist[k]);
      q -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = y_hist[k].dot(q) / y_hist[k].dot(s_hist[k]);
      q += s_hist[k] * (alpha[k] - beta);
    }
    VectorXd dir = -q;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      dir = -g;
      slope = -g.squaredNorm();
      s_hist.clear();
      y_hist.clear();
    }

    double t = 1.0;
    Point candidate = x;
    VectorXd g_new;
    double f_new = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int b = 0; b < opt.max_backtracks; ++b) {
      candidate = retract(x, VectorXd(t * dir));
      f_new = eval(candidate, g_new);
      if (std::isfinite(f_new) && f_new <= f + opt.armijo * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;

    VectorXd s = t * dir;
    VectorXd y = g_new - g;
    if (y.dot(s) > 1e-300) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      if (static_cast<int>(s_hist.size()) > opt.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    x = candidate;
    f = f_new;
    g = g_new;
    out = {x, f, it + 1};
    on_accept(it + 1, x, f);
  }
  out.point = x;
  out.value = f;
  return out;
}

}  // namespace mereology::detail

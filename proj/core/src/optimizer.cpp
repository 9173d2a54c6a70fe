#include "replan/optimizer.hpp"

#include <chrono>
#include <cmath>

#include "replan/errors.hpp"
#include "replan/eval_counters.hpp"

namespace replan {

namespace {

double safe_cost(const ScalarFn& f, const Eigen::VectorXd& u) {
  try {
    const double J = f(u);
    return std::isfinite(J) ? J : std::numeric_limits<double>::infinity();
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

Eigen::VectorXd project(const Eigen::VectorXd& u, double lo, double hi) {
  return u.cwiseMax(lo).cwiseMin(hi);
}

// Gradient with components pointing out of active bounds zeroed.
Eigen::VectorXd projected_gradient(const Eigen::VectorXd& u, const Eigen::VectorXd& g,
                                   double lo, double hi) {
  Eigen::VectorXd pg = g;
  for (int i = 0; i < u.size(); ++i) {
    if (u[i] <= lo && g[i] > 0.0) pg[i] = 0.0;
    if (u[i] >= hi && g[i] < 0.0) pg[i] = 0.0;
  }
  return pg;
}

}  // namespace

OptimReport minimize(const ScalarFn& cost_fn, const VectorFn& grad_fn,
                     const Eigen::VectorXd& u0, const OptimizerConfig& config,
                     const Eigen::MatrixXd* h0_inv) {
  const auto t_start = std::chrono::steady_clock::now();
  EvalCounters::optimizer_runs.fetch_add(1, std::memory_order_relaxed);

  const int n = static_cast<int>(u0.size());
  const double lo = config.lower, hi = config.upper;

  OptimReport rep;
  Eigen::VectorXd u = project(u0, lo, hi);
  double J = safe_cost(cost_fn, u);
  if (!std::isfinite(J)) throw NonFiniteCost("minimize: cost not finite at start");
  Eigen::VectorXd g = grad_fn(u);

  Eigen::MatrixXd Hinv;
  bool hinv_seeded = false;
  if (h0_inv != nullptr && h0_inv->rows() == n && h0_inv->cols() == n) {
    Hinv = *h0_inv;
    hinv_seeded = true;
  } else {
    Hinv = Eigen::MatrixXd::Identity(n, n);
  }

  rep.u = u;
  rep.cost = J;

  int it = 0;
  for (; it < config.max_iters; ++it) {
    const Eigen::VectorXd pg = projected_gradient(u, g, lo, hi);
    rep.grad_norm = pg.lpNorm<Eigen::Infinity>();
    if (rep.grad_norm <= config.grad_tol) {
      rep.converged = true;
      break;
    }

    Eigen::VectorXd d = -(Hinv * g);
    // Deactivate direction components that push into an active bound.
    for (int i = 0; i < n; ++i) {
      if ((u[i] <= lo && d[i] < 0.0) || (u[i] >= hi && d[i] > 0.0)) d[i] = 0.0;
    }
    double slope = g.dot(d);
    if (!(slope < 0.0)) {  // not a descent direction; reset to steepest descent
      Hinv.setIdentity();
      hinv_seeded = false;
      d = -pg;
      slope = -pg.squaredNorm();
      if (!(slope < 0.0)) {
        rep.converged = true;  // pg == 0 within rounding
        break;
      }
    }

    // Backtracking Armijo search along the projected path.
    double alpha = 1.0;
    Eigen::VectorXd u_new;
    double J_new = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int bt = 0; bt < config.max_backtracks; ++bt) {
      u_new = project(u + alpha * d, lo, hi);
      J_new = safe_cost(cost_fn, u_new);
      if (J_new <= J + config.armijo_c1 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted || !(J_new <= J)) {
      rep.line_search_failed = true;
      break;  // keep best iterate
    }

    Eigen::VectorXd g_new;
    try {
      g_new = grad_fn(u_new);
    } catch (const Error&) {
      rep.line_search_failed = true;
      break;
    }

    const Eigen::VectorXd s = u_new - u;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!hinv_seeded) {
        Hinv *= sy / y.squaredNorm();
        hinv_seeded = true;
      }
      // BFGS inverse update
      const Eigen::VectorXd Hy = Hinv * y;
      const double yHy = y.dot(Hy);
      Hinv += ((sy + yHy) / (sy * sy)) * (s * s.transpose());
      Hinv -= (Hy * s.transpose() + s * Hy.transpose()) / sy;
    }

    u = u_new;
    J = J_new;
    g = std::move(g_new);
    rep.u = u;
    rep.cost = J;
  }

  rep.iterations = it;
  const Eigen::VectorXd pg = projected_gradient(rep.u, grad_fn(rep.u), lo, hi);
  rep.grad_norm = pg.lpNorm<Eigen::Infinity>();
  if (rep.grad_norm <= config.grad_tol) rep.converged = true;
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

}  // namespace replan

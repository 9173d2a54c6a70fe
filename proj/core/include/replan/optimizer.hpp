#ifndef REPLAN_OPTIMIZER_HPP
#define REPLAN_OPTIMIZER_HPP

#include <Eigen/Core>
#include <functional>
#include <limits>

namespace replan {

struct OptimizerConfig {
  int max_iters = 500;
  double grad_tol = 1e-6;     // inf-norm of the projected gradient
  double armijo_c1 = 1e-4;
  int max_backtracks = 60;
  double lower = -std::numeric_limits<double>::infinity();  // per-coefficient box
  double upper = std::numeric_limits<double>::infinity();
};

struct OptimReport {
  Eigen::VectorXd u;
  double cost = 0.0;
  double grad_norm = 0.0;  // projected gradient inf-norm at u
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
  double wall_time_s = 0.0;
};

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;
using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Projected quasi-Newton (BFGS) descent with backtracking line search and
/// per-coefficient box projection. Cost sequence is monotone nonincreasing;
/// the result always respects the box. Deterministic for identical inputs.
/// Cost evaluations that throw NonFiniteState/NonFiniteCost are treated as
/// +inf and rejected by the line search.
///
/// `h0_inv`, if non-null, seeds the inverse-Hessian estimate (it must be
/// symmetric positive definite). Warm starts near a previous optimum converge
/// dramatically faster when seeded with a curvature estimate from that
/// optimum; the seed is discarded if it ever yields an ascent direction.
OptimReport minimize(const ScalarFn& cost_fn, const VectorFn& grad_fn,
                     const Eigen::VectorXd& u0, const OptimizerConfig& config = {},
                     const Eigen::MatrixXd* h0_inv = nullptr);

}  // namespace replan

#endif  // REPLAN_OPTIMIZER_HPP

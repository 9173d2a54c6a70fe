#ifndef REPLAN_HDSA_HPP
#define REPLAN_HDSA_HPP

#include <Eigen/Core>

#include "replan/optimizer.hpp"
#include "replan/problem.hpp"

namespace replan {

/// Post-optimality sensitivities d u*_i / d theta_j at a converged optimum,
/// obtained from the implicit-function identity H D = -B.
struct SensitivityMatrix {
  Eigen::MatrixXd d;         // (N+1) x P
  Eigen::VectorXd theta_at;  // theta where computed
  double cond_h = 0.0;       // Hessian condition estimate
  bool regularized = false;  // Tikhonov fallback applied
};

struct HdsaConfig {
  double step_u = 1e-5;        // FD step in controller coefficients (radians)
  double step_theta = 1e-4;    // FD step in theta units
  double cond_ceiling = 1e12;  // beyond this, Tikhonov-regularize
};

/// Central finite differences of the exact gradient over u_j, symmetrized as
/// (H + H^T)/2.
Eigen::MatrixXd hessian(const GradFn& grad, const Eigen::VectorXd& u_star,
                        const Eigen::VectorXd& theta, double step_u = 1e-5);

/// Central finite differences of the exact gradient over theta_j.
Eigen::MatrixXd mixed_partials(const GradFn& grad, const Eigen::VectorXd& u_star,
                               const Eigen::VectorXd& theta, double step_theta = 1e-4);

/// Solves H D = -B columnwise (dense symmetric solve). If the condition
/// estimate exceeds the ceiling, retries with H + lambda I,
/// lambda = 1e-8 tr(H)/(N+1), and marks the result regularized. Throws
/// SingularHessian if even the regularized solve is unusable.
SensitivityMatrix sensitivity_matrix(const Eigen::MatrixXd& H, const Eigen::MatrixXd& B,
                                     const Eigen::VectorXd& theta_at,
                                     double cond_ceiling = 1e12);

/// Symmetric positive definite pseudo-inverse of |H|: eigenvalue magnitudes,
/// floored at 1e-10 of the largest, are inverted in the eigenbasis. Seeding
/// warm-started BFGS runs with this matrix cuts iteration counts by orders of
/// magnitude on ill-conditioned costs.
Eigen::MatrixXd curvature_seed(const Eigen::MatrixXd& H);

/// minimize() with curvature restarts: whenever the iteration budget runs out
/// short of tolerance, recompute the curvature seed at the last iterate and
/// continue from there, up to `restarts` times. Rescues warm starts whose
/// seed curvature no longer matches the local valley.
OptimReport minimize_restarted(const ScalarFn& cost_fn, const VectorFn& grad_fn,
                               const Eigen::VectorXd& u0, const OptimizerConfig& config,
                               const Eigen::MatrixXd* h0_inv = nullptr, int restarts = 2,
                               double step_u = 1e-5);

/// hessian + mixed_partials + solve in one call.
SensitivityMatrix hdsa_at(const GradFn& grad, const Eigen::VectorXd& u_star,
                          const Eigen::VectorXd& theta, const HdsaConfig& cfg = {});

}  // namespace replan

#endif  // REPLAN_HDSA_HPP

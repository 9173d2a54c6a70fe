#ifndef REPLAN_PROBLEM_HPP
#define REPLAN_PROBLEM_HPP

#include <Eigen/Core>
#include <array>
#include <functional>

#include "replan/controller.hpp"
#include "replan/ode.hpp"
#include "replan/theta.hpp"

namespace replan {

/// Discretized trajectory optimal-control problem with penalty cost
///
///   J = -x2(T)/xbar2
///     + beta1 ((x1(T)-h_f)/h_f)^2 + beta2 ((x3(T)-v_f)/v_f)^2
///     + beta3 ((x4(T)-g_f)/g_f)^2
///     + quartic one-sided sums over integration nodes for
///       x1 >= 0, x3 >= 1, |x4| <= gamma_limit.
///
/// State indices follow the shuttle layout (h, phi, v, gamma); xbar holds the
/// four normalization scales, frozen after the nominal solve.
struct ProblemSpec {
  Dynamics dynamics;
  JacX jac_x;
  JacU jac_u;
  Eigen::VectorXd x0;
  TimeGrid integ_grid;    // integration nodes (penalty sums run over these)
  TimeGrid control_grid;  // N+1 controller nodes

  double h_f = 80000.0;
  double v_f = 2500.0;
  double g_f = -5.0 * M_PI / 180.0;
  double gamma_limit = 89.0 * M_PI / 180.0;

  std::array<double, 8> beta{};  // beta[1]..beta[7]; beta[0] unused
  Eigen::Vector4d xbar = Eigen::Vector4d::Ones();
  double u_bound = M_PI / 2.0;

  void validate() const;

  /// Copy with xbar set to max |x_i(t)| over the given trajectory.
  ProblemSpec with_scales_from(const Trajectory& traj) const;

  Controller make_controller(const Eigen::VectorXd& coeffs) const {
    return Controller(control_grid, coeffs);
  }
};

/// Integrate and evaluate the penalty cost. Throws NonFiniteState on blow-up.
double cost(const ProblemSpec& spec, const Controller& controller, const ThetaVector& theta);

/// Penalty cost of an already-integrated trajectory (no dynamics calls).
double cost_of_trajectory(const ProblemSpec& spec, const Trajectory& traj);

/// Exact gradient dJ/du_i assembled from propagated state sensitivities.
Eigen::VectorXd cost_gradient(const ProblemSpec& spec, const Controller& controller,
                              const ThetaVector& theta);

/// Cost and gradient in one augmented integration.
std::pair<double, Eigen::VectorXd> cost_and_gradient(const ProblemSpec& spec,
                                                     const Controller& controller,
                                                     const ThetaVector& theta);

/// (u, theta) -> gradient closure over a base ThetaVector (theta argument
/// replaces base.theta). Used by HDSA and the optimizer.
using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& u,
                                             const Eigen::VectorXd& theta)>;
using CostFn = std::function<double(const Eigen::VectorXd& u, const Eigen::VectorXd& theta)>;

GradFn gradient_fn(const ProblemSpec& spec, const ThetaVector& base);
CostFn cost_fn(const ProblemSpec& spec, const ThetaVector& base);

}  // namespace replan

#endif  // REPLAN_PROBLEM_HPP

#ifndef REPLAN_ODE_HPP
#define REPLAN_ODE_HPP

#include <Eigen/Core>
#include <functional>

#include "replan/controller.hpp"
#include "replan/time_grid.hpp"

namespace replan {

/// Right-hand side f(t, x, u, p) of a controlled ODE with scalar control.
using Dynamics =
    std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x, double u,
                                  const Eigen::VectorXd& p)>;
/// df/dx, n x n.
using JacX = std::function<Eigen::MatrixXd(double t, const Eigen::VectorXd& x, double u,
                                           const Eigen::VectorXd& p)>;
/// df/du, n-vector (u is the scalar control value at time t).
using JacU = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x, double u,
                                           const Eigen::VectorXd& p)>;

/// Classical fixed-step RK4 over the integration grid. Throws NonFiniteState
/// if any state component leaves the finite range.
Trajectory integrate(const Dynamics& f, const Eigen::VectorXd& x0, const TimeGrid& grid,
                     const Controller& controller, const Eigen::VectorXd& params);

/// RK4 on the augmented system (x, S) with S' = (df/dx) S + (df/du) phi(t)^T,
/// S(0) = 0, where phi(t) are the controller's hat-basis weights. S at node k
/// is the exact forward derivative of the discrete RK4 state at node k with
/// respect to the controller coefficients.
Trajectory integrate_with_sensitivities(const Dynamics& f, const JacX& jac_x,
                                        const JacU& jac_u, const Eigen::VectorXd& x0,
                                        const TimeGrid& grid, const Controller& controller,
                                        const Eigen::VectorXd& params);

}  // namespace replan

#endif  // REPLAN_ODE_HPP

#ifndef REPLAN_CONTROLLER_HPP
#define REPLAN_CONTROLLER_HPP

#include <Eigen/Core>

#include "replan/time_grid.hpp"

namespace replan {

/// Piecewise-linear (hat basis) control signal with one coefficient per node
/// of its time grid: u(t) = sum_i coeffs[i] * phi_i(t).
struct Controller {
  TimeGrid grid;           // N+1 nodes
  Eigen::VectorXd coeffs;  // length N+1

  Controller() = default;
  Controller(const TimeGrid& g, Eigen::VectorXd c);

  int n_coeffs() const { return static_cast<int>(coeffs.size()); }

  /// u(t) by hat-basis interpolation; exact coefficient value at nodes.
  double eval(double t) const;

  /// Basis weights of all nodes at time t (at most two nonzero).
  /// Returns (left node index, left weight); right weight is 1 - left weight.
  std::pair<int, double> bracket(double t) const;
};

/// Hat basis function phi_i(t) on a grid: 1 at node i, linear to 0 at the
/// neighboring nodes, 0 elsewhere.
double hat_basis_eval(int i, double t, const TimeGrid& grid);

}  // namespace replan

#endif  // REPLAN_CONTROLLER_HPP

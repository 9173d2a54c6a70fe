#ifndef REPLAN_TIME_GRID_HPP
#define REPLAN_TIME_GRID_HPP

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <vector>

#include "replan/errors.hpp"

namespace replan {

/// Uniform time grid on [t0, T] with n_steps intervals (n_steps + 1 nodes).
struct TimeGrid {
  double t0 = 0.0;
  double T = 1.0;
  int n_steps = 1;

  TimeGrid() = default;
  TimeGrid(double t0_, double T_, int n_steps_) : t0(t0_), T(T_), n_steps(n_steps_) {
    if (n_steps < 1) throw ConfigError("TimeGrid: n_steps must be >= 1");
    if (!(T > t0)) throw ConfigError("TimeGrid: T must exceed t0");
  }

  double dt() const { return (T - t0) / n_steps; }
  int n_nodes() const { return n_steps + 1; }

  double node(int i) const {
    if (i < 0 || i > n_steps) throw IndexOutOfRange("TimeGrid: node index out of range");
    // Exact endpoints; interior nodes by affine combination to keep spacing uniform.
    if (i == n_steps) return T;
    return t0 + i * dt();
  }

  std::vector<double> nodes() const {
    std::vector<double> out(n_nodes());
    for (int i = 0; i <= n_steps; ++i) out[i] = node(i);
    return out;
  }
};

/// State history on a time grid, optionally with per-node sensitivities
/// d x(t_k) / d u_j stored as n x (N+1) matrices.
struct Trajectory {
  TimeGrid grid;
  std::vector<Eigen::VectorXd> states;
  std::optional<std::vector<Eigen::MatrixXd>> sens;

  const Eigen::VectorXd& final_state() const { return states.back(); }
};

}  // namespace replan

#endif  // REPLAN_TIME_GRID_HPP

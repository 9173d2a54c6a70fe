#include "replan/controller.hpp"

#include <algorithm>
#include <cmath>

namespace replan {

Controller::Controller(const TimeGrid& g, Eigen::VectorXd c) : grid(g), coeffs(std::move(c)) {
  if (coeffs.size() != grid.n_nodes())
    throw ShapeMismatch("Controller: coeffs length must equal grid node count");
}

std::pair<int, double> Controller::bracket(double t) const {
  const double dt = grid.dt();
  if (t <= grid.t0) return {0, 1.0};
  if (t >= grid.T) return {grid.n_steps - 1, 0.0};
  int i = static_cast<int>(std::floor((t - grid.t0) / dt));
  i = std::clamp(i, 0, grid.n_steps - 1);
  // floor can land one cell off at node boundaries
  if (t < grid.node(i)) --i;
  else if (t >= grid.node(i + 1) && i + 1 < grid.n_steps) ++i;
  const double w_right = (t - grid.node(i)) / dt;
  return {i, 1.0 - w_right};
}

double Controller::eval(double t) const {
  auto [i, w_left] = bracket(t);
  return w_left * coeffs[i] + (1.0 - w_left) * coeffs[i + 1];
}

double hat_basis_eval(int i, double t, const TimeGrid& grid) {
  if (i < 0 || i > grid.n_steps) throw IndexOutOfRange("hat_basis_eval: node index out of range");
  const double ti = grid.node(i);
  const double dt = grid.dt();
  if (i > 0 && t >= grid.node(i - 1) && t <= ti) return (t - grid.node(i - 1)) / dt;
  if (i < grid.n_steps && t >= ti && t <= grid.node(i + 1)) return (grid.node(i + 1) - t) / dt;
  if (t == ti) return 1.0;
  return 0.0;
}

}  // namespace replan

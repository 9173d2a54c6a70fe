#include "replan/ode.hpp"

#include <cmath>

#include "replan/errors.hpp"
#include "replan/eval_counters.hpp"

namespace replan {

std::atomic<std::uint64_t> EvalCounters::dynamics_calls{0};
std::atomic<std::uint64_t> EvalCounters::cost_calls{0};
std::atomic<std::uint64_t> EvalCounters::optimizer_runs{0};

namespace {

void check_finite(const Eigen::VectorXd& x, double t) {
  if (!x.allFinite())
    throw NonFiniteState("integrate: non-finite state at t = " + std::to_string(t));
}

// Hat-basis weights of the controller at time t as a sparse pair.
struct BasisAt {
  int left;
  double w_left;
  double value;
};

BasisAt basis_at(const Controller& c, double t) {
  auto [i, w] = c.bracket(t);
  return {i, w, w * c.coeffs[i] + (1.0 - w) * c.coeffs[i + 1]};
}

}  // namespace

Trajectory integrate(const Dynamics& f, const Eigen::VectorXd& x0, const TimeGrid& grid,
                     const Controller& controller, const Eigen::VectorXd& params) {
  if (controller.grid.t0 > grid.t0 + 1e-9 || controller.grid.T < grid.T - 1e-9)
    throw ConfigError("integrate: controller grid does not span the integration window");
  EvalCounters::dynamics_calls.fetch_add(1, std::memory_order_relaxed);

  const double h = grid.dt();
  Trajectory out;
  out.grid = grid;
  out.states.reserve(grid.n_nodes());
  Eigen::VectorXd x = x0;
  check_finite(x, grid.t0);
  out.states.push_back(x);

  for (int k = 0; k < grid.n_steps; ++k) {
    const double t = grid.node(k);
    const Eigen::VectorXd k1 = f(t, x, controller.eval(t), params);
    const Eigen::VectorXd k2 =
        f(t + 0.5 * h, x + 0.5 * h * k1, controller.eval(t + 0.5 * h), params);
    const Eigen::VectorXd k3 =
        f(t + 0.5 * h, x + 0.5 * h * k2, controller.eval(t + 0.5 * h), params);
    const Eigen::VectorXd k4 = f(t + h, x + h * k3, controller.eval(t + h), params);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite(x, t + h);
    out.states.push_back(x);
  }
  return out;
}

Trajectory integrate_with_sensitivities(const Dynamics& f, const JacX& jac_x,
                                        const JacU& jac_u, const Eigen::VectorXd& x0,
                                        const TimeGrid& grid, const Controller& controller,
                                        const Eigen::VectorXd& params) {
  if (controller.grid.t0 > grid.t0 + 1e-9 || controller.grid.T < grid.T - 1e-9)
    throw ConfigError("integrate: controller grid does not span the integration window");
  EvalCounters::dynamics_calls.fetch_add(1, std::memory_order_relaxed);

  const double h = grid.dt();
  const int n = static_cast<int>(x0.size());
  const int nc = controller.n_coeffs();

  Trajectory out;
  out.grid = grid;
  out.states.reserve(grid.n_nodes());
  out.sens.emplace();
  out.sens->reserve(grid.n_nodes());

  Eigen::VectorXd x = x0;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, nc);  // x0 independent of u
  check_finite(x, grid.t0);
  out.states.push_back(x);
  out.sens->push_back(S);

  // One RK4 stage of the augmented system. Adds (df/du) phi(t)^T via the two
  // nonzero hat weights at the stage time.
  auto stage = [&](double t, const Eigen::VectorXd& xs, const Eigen::MatrixXd& Ss,
                   Eigen::VectorXd& kx, Eigen::MatrixXd& kS) {
    const BasisAt b = basis_at(controller, t);
    kx = f(t, xs, b.value, params);
    const Eigen::MatrixXd A = jac_x(t, xs, b.value, params);
    if (A.rows() != n || A.cols() != n)
      throw ShapeMismatch("integrate_with_sensitivities: jac_x shape mismatch");
    const Eigen::VectorXd bu = jac_u(t, xs, b.value, params);
    if (bu.size() != n)
      throw ShapeMismatch("integrate_with_sensitivities: jac_u shape mismatch");
    kS.noalias() = A * Ss;
    kS.col(b.left) += b.w_left * bu;
    kS.col(b.left + 1) += (1.0 - b.w_left) * bu;
  };

  Eigen::VectorXd k1x(n), k2x(n), k3x(n), k4x(n);
  Eigen::MatrixXd k1S(n, nc), k2S(n, nc), k3S(n, nc), k4S(n, nc);

  for (int k = 0; k < grid.n_steps; ++k) {
    const double t = grid.node(k);
    stage(t, x, S, k1x, k1S);
    stage(t + 0.5 * h, x + 0.5 * h * k1x, S + 0.5 * h * k1S, k2x, k2S);
    stage(t + 0.5 * h, x + 0.5 * h * k2x, S + 0.5 * h * k2S, k3x, k3S);
    stage(t + h, x + h * k3x, S + h * k3S, k4x, k4S);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    S += (h / 6.0) * (k1S + 2.0 * k2S + 2.0 * k3S + k4S);
    check_finite(x, t + h);
    if (!S.allFinite())
      throw NonFiniteState("integrate_with_sensitivities: non-finite sensitivity");
    out.states.push_back(x);
    out.sens->push_back(S);
  }
  return out;
}

}  // namespace replan

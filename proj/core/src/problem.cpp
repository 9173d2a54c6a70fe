#include "replan/problem.hpp"

#include <cmath>

#include "replan/errors.hpp"
#include "replan/eval_counters.hpp"

namespace replan {

void ProblemSpec::validate() const {
  for (int i = 1; i <= 7; ++i)
    if (beta[i] < 0.0) throw ConfigError("ProblemSpec: penalty weights must be >= 0");
  if ((xbar.array() <= 0.0).any())
    throw ConfigError("ProblemSpec: normalization scales must be > 0");
  if (!dynamics) throw ConfigError("ProblemSpec: dynamics not set");
}

ProblemSpec ProblemSpec::with_scales_from(const Trajectory& traj) const {
  ProblemSpec out = *this;
  Eigen::Vector4d s = Eigen::Vector4d::Zero();
  for (const auto& x : traj.states)
    for (int i = 0; i < 4; ++i) s[i] = std::max(s[i], std::abs(x[i]));
  for (int i = 0; i < 4; ++i)
    if (!(s[i] > 0.0)) s[i] = 1.0;
  out.xbar = s;
  return out;
}

double cost_of_trajectory(const ProblemSpec& spec, const Trajectory& traj) {
  const Eigen::VectorXd& xT = traj.final_state();
  const auto& b = spec.beta;
  const double gl = spec.gamma_limit;

  double J = -xT[1] / spec.xbar[1];
  J += b[1] * std::pow((xT[0] - spec.h_f) / spec.h_f, 2);
  J += b[2] * std::pow((xT[2] - spec.v_f) / spec.v_f, 2);
  J += b[3] * std::pow((xT[3] - spec.g_f) / spec.g_f, 2);

  double s_h = 0.0, s_v = 0.0, s_glo = 0.0, s_ghi = 0.0;
  for (const auto& x : traj.states) {
    if (x[0] < 0.0) s_h += std::pow(x[0], 4);
    if (x[2] < 1.0) s_v += std::pow(x[2] - 1.0, 4);
    if (x[3] < -gl) s_glo += std::pow(x[3] + gl, 4);
    if (x[3] > gl) s_ghi += std::pow(x[3] - gl, 4);
  }
  J += b[4] * s_h / std::pow(spec.xbar[0], 4);
  J += b[5] * s_v / std::pow(spec.xbar[2], 4);
  J += b[6] * s_glo / std::pow(spec.xbar[3], 4);
  J += b[7] * s_ghi / std::pow(spec.xbar[3], 4);

  if (!std::isfinite(J)) throw NonFiniteCost("cost: non-finite value");
  return J;
}

double cost(const ProblemSpec& spec, const Controller& controller, const ThetaVector& theta) {
  EvalCounters::cost_calls.fetch_add(1, std::memory_order_relaxed);
  const Trajectory traj =
      integrate(spec.dynamics, spec.x0, spec.integ_grid, controller, dimensionalize(theta));
  return cost_of_trajectory(spec, traj);
}

std::pair<double, Eigen::VectorXd> cost_and_gradient(const ProblemSpec& spec,
                                                     const Controller& controller,
                                                     const ThetaVector& theta) {
  EvalCounters::cost_calls.fetch_add(1, std::memory_order_relaxed);
  const Trajectory traj =
      integrate_with_sensitivities(spec.dynamics, spec.jac_x, spec.jac_u, spec.x0,
                                   spec.integ_grid, controller, dimensionalize(theta));
  const double J = cost_of_trajectory(spec, traj);

  const auto& sens = *traj.sens;
  const Eigen::VectorXd& xT = traj.final_state();
  const Eigen::MatrixXd& ST = sens.back();
  const auto& b = spec.beta;
  const double gl = spec.gamma_limit;
  const int nc = static_cast<int>(ST.cols());

  Eigen::VectorXd g = Eigen::VectorXd::Zero(nc);
  g -= ST.row(1).transpose() / spec.xbar[1];
  g += (2.0 * b[1] * (xT[0] - spec.h_f) / (spec.h_f * spec.h_f)) * ST.row(0).transpose();
  g += (2.0 * b[2] * (xT[2] - spec.v_f) / (spec.v_f * spec.v_f)) * ST.row(2).transpose();
  g += (2.0 * b[3] * (xT[3] - spec.g_f) / (spec.g_f * spec.g_f)) * ST.row(3).transpose();

  Eigen::VectorXd a_h = Eigen::VectorXd::Zero(nc), a_v = Eigen::VectorXd::Zero(nc),
                  a_glo = Eigen::VectorXd::Zero(nc), a_ghi = Eigen::VectorXd::Zero(nc);
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const auto& x = traj.states[k];
    const auto& S = sens[k];
    if (x[0] < 0.0) a_h += std::pow(x[0], 3) * S.row(0).transpose();
    if (x[2] < 1.0) a_v += std::pow(x[2] - 1.0, 3) * S.row(2).transpose();
    if (x[3] < -gl) a_glo += std::pow(x[3] + gl, 3) * S.row(3).transpose();
    if (x[3] > gl) a_ghi += std::pow(x[3] - gl, 3) * S.row(3).transpose();
  }
  g += (4.0 * b[4] / std::pow(spec.xbar[0], 4)) * a_h;
  g += (4.0 * b[5] / std::pow(spec.xbar[2], 4)) * a_v;
  g += (4.0 * b[6] / std::pow(spec.xbar[3], 4)) * a_glo;
  g += (4.0 * b[7] / std::pow(spec.xbar[3], 4)) * a_ghi;

  return {J, g};
}

Eigen::VectorXd cost_gradient(const ProblemSpec& spec, const Controller& controller,
                              const ThetaVector& theta) {
  return cost_and_gradient(spec, controller, theta).second;
}

GradFn gradient_fn(const ProblemSpec& spec, const ThetaVector& base) {
  return [spec, base](const Eigen::VectorXd& u, const Eigen::VectorXd& theta) {
    return cost_gradient(spec, spec.make_controller(u), base.with_theta(theta));
  };
}

CostFn cost_fn(const ProblemSpec& spec, const ThetaVector& base) {
  return [spec, base](const Eigen::VectorXd& u, const Eigen::VectorXd& theta) {
    return cost(spec, spec.make_controller(u), base.with_theta(theta));
  };
}

}  // namespace replan

#include "replan/shuttle.hpp"

#include <cmath>

#include "replan/errors.hpp"

namespace replan {
namespace shuttle {

namespace {

constexpr double kRad2Deg = 180.0 / M_PI;
constexpr double kVelocityFloor = 1e-6;  // ft/s

struct Forces {
  double rho, r, g, u_deg, cl, cd, q, drag, lift;
};

Forces forces(const Eigen::VectorXd& x, double u, const Eigen::VectorXd& p) {
  Forces F;
  F.rho = p[kRho0] * std::exp(-x[kAltitude] / kScaleHeight);
  F.r = kEarthRadius + x[kAltitude];
  F.g = kGM / (F.r * F.r);
  F.u_deg = u * kRad2Deg;
  F.cl = p[kA0] + p[kA1] * F.u_deg;
  F.cd = p[kB0] + p[kB1] * F.u_deg + p[kB2] * F.u_deg * F.u_deg;
  F.q = 0.5 * kRefArea * F.rho * x[kVelocity] * x[kVelocity];
  F.drag = F.cd * F.q;
  F.lift = F.cl * F.q;
  return F;
}

void check_state(const Eigen::VectorXd& x) {
  if (x.size() != 4) throw ShapeMismatch("shuttle: state must have 4 components");
  if (x[kVelocity] < kVelocityFloor)
    throw DegenerateVelocity("shuttle: velocity below floor");
}

}  // namespace

Eigen::VectorXd nominal_params() {
  Eigen::VectorXd p(kNumParams);
  p[kMass] = 20300.0 / 32.173;
  p[kRho0] = 0.002378;
  p[kA0] = -0.20704;
  p[kA1] = 0.029244;
  p[kB0] = 0.07854;
  p[kB1] = -0.61592e-2;
  p[kB2] = 0.621408e-3;
  return p;
}

Eigen::VectorXd initial_state() {
  Eigen::VectorXd x(4);
  x << 260000.0, 0.0, 25600.0, -M_PI / 180.0;
  return x;
}

Eigen::VectorXd dynamics(double /*t*/, const Eigen::VectorXd& x, double u,
                         const Eigen::VectorXd& p) {
  check_state(x);
  const Forces F = forces(x, u, p);
  const double v = x[kVelocity], gam = x[kFlightPath], m = p[kMass];
  const double sg = std::sin(gam), cg = std::cos(gam);

  Eigen::VectorXd dx(4);
  dx[kAltitude] = v * sg;
  dx[kLongitude] = v / F.r * cg;
  dx[kVelocity] = -F.drag / m - F.g * sg;
  dx[kFlightPath] = F.lift / (m * v) + cg * (v / F.r - F.g / v);
  if (!dx.allFinite()) throw NonFiniteState("shuttle dynamics: non-finite derivative");
  return dx;
}

Eigen::MatrixXd jac_x(double /*t*/, const Eigen::VectorXd& x, double u,
                      const Eigen::VectorXd& p) {
  check_state(x);
  const Forces F = forces(x, u, p);
  const double v = x[kVelocity], gam = x[kFlightPath], m = p[kMass];
  const double sg = std::sin(gam), cg = std::cos(gam);
  const double r = F.r, g = F.g;
  // rho' = -rho/h_r, g' = -2g/r; drag and lift scale with rho and v^2.
  const double g_h = -2.0 * g / r;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
  // h_dot = v sin(gamma)
  A(0, 2) = sg;
  A(0, 3) = v * cg;
  // phi_dot = v cos(gamma) / r
  A(1, 0) = -v * cg / (r * r);
  A(1, 2) = cg / r;
  A(1, 3) = -v * sg / r;
  // v_dot = -D/m - g sin(gamma)
  A(2, 0) = F.drag / (m * kScaleHeight) - g_h * sg;
  A(2, 2) = -2.0 * F.drag / (m * v);
  A(2, 3) = -g * cg;
  // gamma_dot = L/(m v) + cos(gamma) (v/r - g/v)
  A(3, 0) = -F.lift / (m * v * kScaleHeight) + cg * (-v / (r * r) - g_h / v);
  A(3, 2) = F.lift / (m * v * v) + cg * (1.0 / r + g / (v * v));
  A(3, 3) = -sg * (v / r - g / v);
  return A;
}

Eigen::VectorXd jac_u(double /*t*/, const Eigen::VectorXd& x, double u,
                      const Eigen::VectorXd& p) {
  check_state(x);
  const Forces F = forces(x, u, p);
  const double v = x[kVelocity], m = p[kMass];
  const double dcd = (p[kB1] + 2.0 * p[kB2] * F.u_deg) * kRad2Deg;
  const double dcl = p[kA1] * kRad2Deg;

  Eigen::VectorXd b = Eigen::VectorXd::Zero(4);
  b[kVelocity] = -F.q * dcd / m;
  b[kFlightPath] = F.q * dcl / (m * v);
  return b;
}

ThetaVector nominal_theta(double beta0) {
  return ThetaVector(Eigen::VectorXd::Zero(kNumParams), nominal_params(), beta0);
}

ProblemSpec shuttle_problem(const ShuttleConfig& cfg) {
  if (cfg.T <= 0.0 || cfg.n_steps < 1 || cfg.N < 1)
    throw ConfigError("shuttle_problem: invalid grid settings");
  ProblemSpec spec;
  spec.dynamics = &dynamics;
  spec.jac_x = &jac_x;
  spec.jac_u = &jac_u;
  spec.x0 = initial_state();
  spec.integ_grid = TimeGrid(0.0, cfg.T, cfg.n_steps);
  spec.control_grid = TimeGrid(0.0, cfg.T, cfg.N);
  spec.beta = {0.0, cfg.beta1, cfg.beta2, cfg.beta3, cfg.beta4,
               cfg.beta5, cfg.beta6, cfg.beta7};
  // Seed scales from the entry state; the pipeline re-freezes them from the
  // nominal optimal trajectory.
  spec.xbar << 260000.0, 1.0, 25600.0, M_PI / 2.0;
  spec.validate();
  return spec;
}

}  // namespace shuttle
}  // namespace replan

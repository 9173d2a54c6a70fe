#ifndef REPLAN_SHUTTLE_HPP
#define REPLAN_SHUTTLE_HPP

#include <Eigen/Core>

#include "replan/ode.hpp"
#include "replan/problem.hpp"
#include "replan/theta.hpp"

namespace replan {
namespace shuttle {

// State layout: x = (h [ft], phi [rad], v [ft/s], gamma [rad]).
inline constexpr int kAltitude = 0;
inline constexpr int kLongitude = 1;
inline constexpr int kVelocity = 2;
inline constexpr int kFlightPath = 3;

// Perturbable parameter layout: p = (m, rho0, a0, a1, b0, b1, b2).
inline constexpr int kMass = 0;
inline constexpr int kRho0 = 1;
inline constexpr int kA0 = 2;
inline constexpr int kA1 = 3;
inline constexpr int kB0 = 4;
inline constexpr int kB1 = 5;
inline constexpr int kB2 = 6;
inline constexpr int kNumParams = 7;

inline const char* const kParamNames[kNumParams] = {"m", "rho0", "a0", "a1",
                                                    "b0", "b1", "b2"};

// Fixed constants (not perturbed).
inline constexpr double kRefArea = 2690.0;        // S, ft^2
inline constexpr double kScaleHeight = 23800.0;   // h_r, ft
inline constexpr double kEarthRadius = 20902900.0;  // Re, ft
inline constexpr double kGM = 0.14076539e17;      // mu, ft^3/s^2

/// Nominal perturbable parameters (m in slug, rho0 in lb/ft^3, rest unitless).
Eigen::VectorXd nominal_params();

/// 2-DOF reentry dynamics. Altitude/longitude/velocity/flight-path-angle
/// rates with exponential atmosphere rho(h) = rho0 exp(-h / h_r) and
/// angle-of-attack (deg) lift/drag polynomials.
Eigen::VectorXd dynamics(double t, const Eigen::VectorXd& x, double u,
                         const Eigen::VectorXd& p);

/// Analytic df/dx (4x4). Column 2 is identically zero: nothing depends on
/// longitude.
Eigen::MatrixXd jac_x(double t, const Eigen::VectorXd& x, double u,
                      const Eigen::VectorXd& p);

/// Analytic df/du (4-vector). Rows 0-1 are zero.
Eigen::VectorXd jac_u(double t, const Eigen::VectorXd& x, double u,
                      const Eigen::VectorXd& p);

/// Entry state: h = 260000 ft, phi = 0, v = 25600 ft/s, gamma = -1 deg.
Eigen::VectorXd initial_state();

struct ShuttleConfig {
  double T = 2000.0;     // final time, s
  int n_steps = 400;     // integration steps
  int N = 20;            // controller intervals (N+1 coefficients)
  double beta0 = 0.1;    // parameter perturbation scale
  // Penalty weights, tuned so the nominal solve meets each terminal target
  // within 2% relative while keeping the cost Hessian mild enough for
  // post-optimality sensitivities. Larger weights tighten the targets but
  // blow up the terminal-dive curvature.
  double beta1 = 5.0;    // terminal altitude
  double beta2 = 1.0;    // terminal velocity
  double beta3 = 1.0;    // terminal flight-path angle
  double beta4 = 1.0;    // h >= 0
  double beta5 = 1.0;    // v >= 1
  double beta6 = 1.0;    // gamma >= -89 deg
  double beta7 = 1.0;    // gamma <= +89 deg
};

/// Fully wired problem: dynamics, Jacobians, targets, penalties, and grids.
/// Normalization scales start at seed values; the pipeline freezes them from
/// the nominal optimal trajectory (ProblemSpec::with_scales).
ProblemSpec shuttle_problem(const ShuttleConfig& cfg);

/// Nominal ThetaVector (theta = 0) for a given beta0.
ThetaVector nominal_theta(double beta0);

}  // namespace shuttle
}  // namespace replan

#endif  // REPLAN_SHUTTLE_HPP

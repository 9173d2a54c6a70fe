#include <doctest.h>

#include <Eigen/Core>
#include <cmath>
#include <random>

#include "replan/shuttle.hpp"

using namespace replan;
using namespace replan::shuttle;

namespace {

Eigen::VectorXd random_admissible_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Eigen::VectorXd x(4);
  x[kAltitude] = 50000.0 + 250000.0 * U(rng);
  x[kLongitude] = 0.5 * U(rng);
  x[kVelocity] = 2000.0 + 24000.0 * U(rng);
  x[kFlightPath] = -0.3 + 0.6 * U(rng);
  return x;
}

}  // namespace

TEST_CASE("[TRIVIAL] nominal parameters match the reference tables") {
  const Eigen::VectorXd p = nominal_params();
  REQUIRE(p.size() == kNumParams);
  CHECK(p[kMass] == 20300.0 / 32.173);
  CHECK(p[kRho0] == 0.002378);
  CHECK(p[kA0] == -0.20704);
  CHECK(p[kA1] == 0.029244);
  CHECK(p[kB0] == 0.07854);
  CHECK(p[kB1] == -0.61592e-2);
  CHECK(p[kB2] == 0.621408e-3);
}

TEST_CASE("[TRIVIAL] zero flight-path angle gives h' = 0 and phi' = v/r") {
  const Eigen::VectorXd p = nominal_params();
  Eigen::VectorXd x(4);
  x << 150000.0, 0.2, 12000.0, 0.0;
  const Eigen::VectorXd dx = dynamics(0.0, x, 0.1, p);
  CHECK(dx[kAltitude] == 0.0);
  CHECK(dx[kLongitude] ==
        doctest::Approx(x[kVelocity] / (kEarthRadius + x[kAltitude])).epsilon(1e-14));
}

TEST_CASE("[DERIVED] derivative at the entry state matches the formulas to 1e-10") {
  const Eigen::VectorXd p = nominal_params();
  const Eigen::VectorXd x = initial_state();
  const double u = 0.0;
  const Eigen::VectorXd dx = dynamics(0.0, x, u, p);

  // Independent re-evaluation of every formula.
  const double h = x[kAltitude], v = x[kVelocity], gamma = x[kFlightPath];
  const double r = kEarthRadius + h;
  const double g = kGM / (r * r);
  const double rho = p[kRho0] * std::exp(-h / kScaleHeight);
  const double u_deg = u * 180.0 / M_PI;
  const double cl = p[kA0] + p[kA1] * u_deg;
  const double cd = p[kB0] + p[kB1] * u_deg + p[kB2] * u_deg * u_deg;
  const double drag = 0.5 * cd * kRefArea * rho * v * v;
  const double lift = 0.5 * cl * kRefArea * rho * v * v;
  Eigen::VectorXd expected(4);
  expected[kAltitude] = v * std::sin(gamma);
  expected[kLongitude] = (v / r) * std::cos(gamma);
  expected[kVelocity] = -drag / p[kMass] - g * std::sin(gamma);
  expected[kFlightPath] = lift / (p[kMass] * v) + std::cos(gamma) * (v / r - g / v);

  for (int i = 0; i < 4; ++i) {
    const double scale = std::max(std::abs(expected[i]), 1e-30);
    CHECK(std::abs(dx[i] - expected[i]) / scale < 1e-10);
  }
}

TEST_CASE("[TRIVIAL] forces are linear in rho0") {
  const Eigen::VectorXd p = nominal_params();
  Eigen::VectorXd p_scaled = p;
  p_scaled[kRho0] *= 1.1;
  Eigen::VectorXd x(4);
  x << 180000.0, 0.1, 15000.0, -0.05;
  const double u = 0.2;
  const double r = kEarthRadius + x[kAltitude];
  const double g = kGM / (r * r);
  const double v = x[kVelocity], gamma = x[kFlightPath];

  const Eigen::VectorXd d1 = dynamics(0.0, x, u, p);
  const Eigen::VectorXd d2 = dynamics(0.0, x, u, p_scaled);
  // Drag part of v' and lift part of gamma' scale by exactly 1.1.
  const double drag1 = -(d1[kVelocity] + g * std::sin(gamma));
  const double drag2 = -(d2[kVelocity] + g * std::sin(gamma));
  const double lift1 = d1[kFlightPath] - std::cos(gamma) * (v / r - g / v);
  const double lift2 = d2[kFlightPath] - std::cos(gamma) * (v / r - g / v);
  CHECK(drag2 / drag1 == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(lift2 / lift1 == doctest::Approx(1.1).epsilon(1e-12));
}

TEST_CASE("[DERIVED] doubling b0 doubles its drag contribution to v'") {
  const Eigen::VectorXd p = nominal_params();
  Eigen::VectorXd p0 = p, p2 = p;
  p0[kB0] = 0.0;
  p2[kB0] = 2.0 * p[kB0];
  Eigen::VectorXd x(4);
  x << 120000.0, 0.0, 8000.0, -0.02;
  const double u = 0.15;
  const double base = dynamics(0.0, x, u, p0)[kVelocity];
  const double with_b0 = dynamics(0.0, x, u, p)[kVelocity];
  const double with_2b0 = dynamics(0.0, x, u, p2)[kVelocity];
  CHECK((with_2b0 - base) == doctest::Approx(2.0 * (with_b0 - base)).epsilon(1e-12));
}

TEST_CASE("[PAPER] jac_x column 2 is identically zero") {
  const Eigen::VectorXd p = nominal_params();
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd x = random_admissible_state(rng);
    const Eigen::MatrixXd J = jac_x(0.0, x, 0.1, p);
    CHECK(J.col(kLongitude).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("[TRIVIAL] jac_x entry dh'/dgamma equals v at gamma = 0") {
  const Eigen::VectorXd p = nominal_params();
  Eigen::VectorXd x(4);
  x << 150000.0, 0.2, 12000.0, 0.0;
  const Eigen::MatrixXd J = jac_x(0.0, x, 0.1, p);
  CHECK(J(kAltitude, kFlightPath) == x[kVelocity]);
}

TEST_CASE("[DERIVED] jac_x matches finite differences at random states") {
  const Eigen::VectorXd p = nominal_params();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> Uu(-0.5, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = random_admissible_state(rng);
    const double u = Uu(rng);
    const Eigen::MatrixXd J = jac_x(0.0, x, u, p);
    Eigen::MatrixXd fd(4, 4);
    for (int j = 0; j < 4; ++j) {
      const double step = std::max(1e-6 * std::abs(x[j]), 1e-9);
      Eigen::VectorXd xp = x, xm = x;
      xp[j] += step;
      xm[j] -= step;
      fd.col(j) = (dynamics(0.0, xp, u, p) - dynamics(0.0, xm, u, p)) / (2.0 * step);
    }
    CHECK((J - fd).norm() / fd.norm() < 1e-5);
  }
}

TEST_CASE("[PAPER] jac_u rows for altitude and longitude are zero") {
  const Eigen::VectorXd p = nominal_params();
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd x = random_admissible_state(rng);
    const Eigen::VectorXd J = jac_u(0.0, x, 0.3, p);
    CHECK(J[kAltitude] == 0.0);
    CHECK(J[kLongitude] == 0.0);
  }
}

TEST_CASE("[DERIVED] jac_u matches finite differences at random states") {
  const Eigen::VectorXd p = nominal_params();
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> Uu(-0.5, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = random_admissible_state(rng);
    const double u = Uu(rng);
    const Eigen::VectorXd J = jac_u(0.0, x, u, p);
    const double step = 1e-6;
    const Eigen::VectorXd fd =
        (dynamics(0.0, x, u + step, p) - dynamics(0.0, x, u - step, p)) / (2.0 * step);
    CHECK((J - fd).norm() / fd.norm() < 1e-6);
  }
}

TEST_CASE("[TRIVIAL] drag sensitivity vanishes at the c_D stationary angle") {
  const Eigen::VectorXd p = nominal_params();
  const double u_deg_star = -p[kB1] / (2.0 * p[kB2]);
  const double u_star = u_deg_star * M_PI / 180.0;
  Eigen::VectorXd x(4);
  x << 150000.0, 0.0, 10000.0, -0.03;
  const Eigen::VectorXd J = jac_u(0.0, x, u_star, p);
  // v' depends on u only through c_D, whose derivative is zero here.
  const double typical = std::abs(jac_u(0.0, x, 0.0, p)[kVelocity]);
  CHECK(std::abs(J[kVelocity]) < 1e-9 * typical);
}

TEST_CASE("[DERIVED] c_D stays positive over the admissible control box") {
  const Eigen::VectorXd p = nominal_params();
  for (double u_deg = -90.0; u_deg <= 90.0; u_deg += 0.5) {
    const double cd = p[kB0] + p[kB1] * u_deg + p[kB2] * u_deg * u_deg;
    CHECK(cd > 0.0);
  }
}

TEST_CASE("[TRIVIAL] the entry geometry decelerates: v' < 0 at the initial state") {
  const Eigen::VectorXd dx = dynamics(0.0, initial_state(), 0.0, nominal_params());
  CHECK(dx[kVelocity] < 0.0);
}

TEST_CASE("[TRIVIAL] degenerate velocity is rejected") {
  const Eigen::VectorXd p = nominal_params();
  Eigen::VectorXd x(4);
  x << 100000.0, 0.0, 1e-9, 0.0;
  CHECK_THROWS_AS(dynamics(0.0, x, 0.0, p), DegenerateVelocity);
  CHECK_THROWS_AS(jac_x(0.0, x, 0.0, p), DegenerateVelocity);
  CHECK_THROWS_AS(jac_u(0.0, x, 0.0, p), DegenerateVelocity);
}

TEST_CASE("[TRIVIAL] initial state matches the entry conditions") {
  const Eigen::VectorXd x = initial_state();
  CHECK(x[kAltitude] == 260000.0);
  CHECK(x[kLongitude] == 0.0);
  CHECK(x[kVelocity] == 25600.0);
  CHECK(x[kFlightPath] == -M_PI / 180.0);
}

TEST_CASE("[DERIVED] shuttle_problem wires targets, grids, and penalties") {
  ShuttleConfig cfg;
  const ProblemSpec spec = shuttle_problem(cfg);
  CHECK(spec.h_f == 80000.0);
  CHECK(spec.v_f == 2500.0);
  CHECK(spec.g_f == -5.0 * M_PI / 180.0);
  CHECK(spec.integ_grid.T == cfg.T);
  CHECK(spec.integ_grid.n_steps == cfg.n_steps);
  CHECK(spec.control_grid.n_steps == cfg.N);
  CHECK(spec.beta[1] == cfg.beta1);
  CHECK(spec.beta[7] == cfg.beta7);
  CHECK(spec.u_bound == M_PI / 2.0);
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("[DERIVED] repeated cost evaluation is bit-identical") {
  ShuttleConfig cfg;
  cfg.n_steps = 200;
  cfg.N = 10;
  const ProblemSpec spec = shuttle_problem(cfg);
  const ThetaVector theta = nominal_theta(cfg.beta0);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(spec.control_grid.n_nodes(), 0.3);
  const double J1 = cost(spec, spec.make_controller(u), theta);
  const double J2 = cost(spec, spec.make_controller(u), theta);
  CHECK(J1 == J2);
}

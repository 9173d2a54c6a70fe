#include <doctest.h>

#include <Eigen/Core>
#include <cmath>

#include "replan/errors.hpp"
#include "replan/optimizer.hpp"

using namespace replan;

TEST_CASE("[TRIVIAL] quadratic bowl converges in at most 50 iterations") {
  Eigen::VectorXd c(4);
  c << 1.0, -2.0, 0.5, 3.0;
  ScalarFn cost = [&](const Eigen::VectorXd& u) { return (u - c).squaredNorm(); };
  VectorFn grad = [&](const Eigen::VectorXd& u) { return (2.0 * (u - c)).eval(); };
  OptimizerConfig cfg;
  cfg.grad_tol = 1e-10;
  OptimReport rep = minimize(cost, grad, Eigen::VectorXd::Zero(4), cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 50);
  CHECK(rep.grad_norm < 1e-10);
  CHECK((rep.u - c).norm() < 1e-9);
}

TEST_CASE("[DERIVED] Rosenbrock from (-1.2, 1) reaches (1, 1)") {
  ScalarFn cost = [](const Eigen::VectorXd& u) {
    const double a = 1.0 - u[0];
    const double b = u[1] - u[0] * u[0];
    return a * a + 100.0 * b * b;
  };
  VectorFn grad = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd g(2);
    const double b = u[1] - u[0] * u[0];
    g[0] = -2.0 * (1.0 - u[0]) - 400.0 * u[0] * b;
    g[1] = 200.0 * b;
    return g;
  };
  Eigen::VectorXd u0(2);
  u0 << -1.2, 1.0;
  OptimizerConfig cfg;
  cfg.max_iters = 2000;
  cfg.grad_tol = 1e-9;
  OptimReport rep = minimize(cost, grad, u0, cfg);
  CHECK(rep.converged);
  CHECK(std::abs(rep.u[0] - 1.0) < 1e-6);
  CHECK(std::abs(rep.u[1] - 1.0) < 1e-6);
}

TEST_CASE("[TRIVIAL] result cost never exceeds the starting cost") {
  ScalarFn cost = [](const Eigen::VectorXd& u) {
    return std::pow(u[0], 4) + std::cos(u[1]) + u.squaredNorm();
  };
  VectorFn grad = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd g(2);
    g[0] = 4.0 * std::pow(u[0], 3) + 2.0 * u[0];
    g[1] = -std::sin(u[1]) + 2.0 * u[1];
    return g;
  };
  for (double s : {-2.0, -0.5, 0.1, 1.7, 3.0}) {
    Eigen::VectorXd u0 = Eigen::VectorXd::Constant(2, s);
    OptimReport rep = minimize(cost, grad, u0);
    CHECK(rep.cost <= cost(u0));
  }
}

TEST_CASE("[TRIVIAL] output respects the box exactly") {
  Eigen::VectorXd c(3);
  c << 2.0, -2.0, 0.25;  // minimizer outside the box in two coordinates
  ScalarFn cost = [&](const Eigen::VectorXd& u) { return (u - c).squaredNorm(); };
  VectorFn grad = [&](const Eigen::VectorXd& u) { return (2.0 * (u - c)).eval(); };
  OptimizerConfig cfg;
  cfg.lower = -1.0;
  cfg.upper = 1.0;
  OptimReport rep = minimize(cost, grad, Eigen::VectorXd::Zero(3), cfg);
  CHECK(rep.converged);
  CHECK(rep.u[0] == 1.0);
  CHECK(rep.u[1] == -1.0);
  CHECK(std::abs(rep.u[2] - 0.25) < 1e-8);
  CHECK((rep.u.array() <= 1.0).all());
  CHECK((rep.u.array() >= -1.0).all());
}

TEST_CASE("[DERIVED] restarting from the optimum terminates in at most 2 iterations") {
  ScalarFn cost = [](const Eigen::VectorXd& u) {
    return std::pow(u[0] - 1.0, 2) + 10.0 * std::pow(u[1] + 0.5, 2);
  };
  VectorFn grad = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd g(2);
    g[0] = 2.0 * (u[0] - 1.0);
    g[1] = 20.0 * (u[1] + 0.5);
    return g;
  };
  OptimReport first = minimize(cost, grad, Eigen::VectorXd::Zero(2));
  REQUIRE(first.converged);
  OptimReport second = minimize(cost, grad, first.u);
  CHECK(second.converged);
  CHECK(second.iterations <= 2);
  CHECK((second.u - first.u).norm() < 1e-12);
}

TEST_CASE("[DERIVED] inverse-Hessian seed solves an ill-conditioned quadratic fast") {
  // J = 1/2 u' A u with eigenvalues spanning 6 decades.
  const int n = 6;
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) diag[i] = std::pow(10.0, i);
  ScalarFn cost = [&](const Eigen::VectorXd& u) {
    return 0.5 * u.dot(diag.asDiagonal() * u);
  };
  VectorFn grad = [&](const Eigen::VectorXd& u) { return (diag.asDiagonal() * u).eval(); };
  Eigen::MatrixXd hinv = diag.cwiseInverse().asDiagonal();
  OptimizerConfig cfg;
  cfg.grad_tol = 1e-8;
  OptimReport rep = minimize(cost, grad, Eigen::VectorXd::Ones(n), cfg, &hinv);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 5);
  CHECK(rep.u.norm() < 1e-8);
}

TEST_CASE("[TRIVIAL] non-finite start is rejected") {
  ScalarFn cost = [](const Eigen::VectorXd&) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  VectorFn grad = [](const Eigen::VectorXd& u) { return u; };
  CHECK_THROWS_AS(minimize(cost, grad, Eigen::VectorXd::Zero(2)), NonFiniteCost);
}

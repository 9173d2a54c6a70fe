#include "replan/hdsa.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "replan/errors.hpp"

namespace replan {

Eigen::MatrixXd hessian(const GradFn& grad, const Eigen::VectorXd& u_star,
                        const Eigen::VectorXd& theta, double step_u) {
  const int n = static_cast<int>(u_star.size());
  Eigen::MatrixXd H(n, n);
  Eigen::VectorXd up = u_star, um = u_star;
  for (int j = 0; j < n; ++j) {
    up[j] += step_u;
    um[j] -= step_u;
    H.col(j) = (grad(up, theta) - grad(um, theta)) / (2.0 * step_u);
    up[j] = u_star[j];
    um[j] = u_star[j];
  }
  if (!H.allFinite()) throw NonFiniteEntry("hessian: non-finite entry");
  return 0.5 * (H + H.transpose());
}

Eigen::MatrixXd mixed_partials(const GradFn& grad, const Eigen::VectorXd& u_star,
                               const Eigen::VectorXd& theta, double step_theta) {
  const int n = static_cast<int>(u_star.size());
  const int P = static_cast<int>(theta.size());
  Eigen::MatrixXd B(n, P);
  Eigen::VectorXd tp = theta, tm = theta;
  for (int j = 0; j < P; ++j) {
    tp[j] += step_theta;
    tm[j] -= step_theta;
    B.col(j) = (grad(u_star, tp) - grad(u_star, tm)) / (2.0 * step_theta);
    tp[j] = theta[j];
    tm[j] = theta[j];
  }
  if (!B.allFinite()) throw NonFiniteEntry("mixed_partials: non-finite entry");
  return B;
}

SensitivityMatrix sensitivity_matrix(const Eigen::MatrixXd& H, const Eigen::MatrixXd& B,
                                     const Eigen::VectorXd& theta_at, double cond_ceiling) {
  if (H.rows() != H.cols() || H.rows() != B.rows())
    throw ShapeMismatch("sensitivity_matrix: H/B shapes disagree");

  SensitivityMatrix out;
  out.theta_at = theta_at;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, Eigen::EigenvaluesOnly);
  const double abs_max = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double abs_min = eig.eigenvalues().cwiseAbs().minCoeff();
  out.cond_h = (abs_min > 0.0) ? abs_max / abs_min : std::numeric_limits<double>::infinity();

  Eigen::MatrixXd Hs = H;
  if (out.cond_h > cond_ceiling) {
    const double lambda = 1e-8 * H.trace() / static_cast<double>(H.rows());
    Hs += lambda * Eigen::MatrixXd::Identity(H.rows(), H.cols());
    out.regularized = true;
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(Hs);
  if (ldlt.info() != Eigen::Success)
    throw SingularHessian("sensitivity_matrix: factorization failed");
  out.d = ldlt.solve(-B);
  if (!out.d.allFinite()) throw SingularHessian("sensitivity_matrix: singular solve");
  return out;
}

Eigen::MatrixXd curvature_seed(const Eigen::MatrixXd& H) {
  if (H.rows() != H.cols()) throw ShapeMismatch("curvature_seed: H not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
  if (eig.info() != Eigen::Success)
    throw SingularHessian("curvature_seed: eigendecomposition failed");
  const Eigen::VectorXd ev = eig.eigenvalues();
  const double floor_ev = 1e-10 * ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv(ev.size());
  for (int i = 0; i < ev.size(); ++i)
    inv[i] = 1.0 / std::max(std::abs(ev[i]), floor_ev);
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

OptimReport minimize_restarted(const ScalarFn& cost_fn, const VectorFn& grad_fn,
                               const Eigen::VectorXd& u0, const OptimizerConfig& config,
                               const Eigen::MatrixXd* h0_inv, int restarts, double step_u) {
  const GradFn grad_adapter = [&](const Eigen::VectorXd& u, const Eigen::VectorXd&) {
    return grad_fn(u);
  };
  const Eigen::VectorXd theta_dummy;
  OptimReport rep = minimize(cost_fn, grad_fn, u0, config, h0_inv);
  double wall = rep.wall_time_s;
  int total_iters = rep.iterations;
  for (int r = 0; r < restarts && !rep.converged; ++r) {
    Eigen::MatrixXd seed;
    try {
      seed = curvature_seed(hessian(grad_adapter, rep.u, theta_dummy, step_u));
    } catch (const Error&) {
      break;  // curvature unusable here; keep the best iterate
    }
    const OptimReport next = minimize(cost_fn, grad_fn, rep.u, config, &seed);
    wall += next.wall_time_s;
    total_iters += next.iterations;
    if (next.cost <= rep.cost) rep = next;
    if (rep.converged) break;
  }
  rep.wall_time_s = wall;
  rep.iterations = total_iters;
  return rep;
}

SensitivityMatrix hdsa_at(const GradFn& grad, const Eigen::VectorXd& u_star,
                          const Eigen::VectorXd& theta, const HdsaConfig& cfg) {
  const Eigen::MatrixXd H = hessian(grad, u_star, theta, cfg.step_u);
  const Eigen::MatrixXd B = mixed_partials(grad, u_star, theta, cfg.step_theta);
  return sensitivity_matrix(H, B, theta, cfg.cond_ceiling);
}

}  // namespace replan

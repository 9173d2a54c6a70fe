#include "replan/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "replan/errors.hpp"

namespace replan {

int JacobianGrid::n_nodes() const {
  int n = 1;
  for (const auto& c : node_coords) n *= static_cast<int>(c.size());
  return n;
}

int JacobianGrid::node_index(const std::vector<int>& idx) const {
  int flat = 0;
  for (size_t d = 0; d < node_coords.size(); ++d)
    flat = flat * static_cast<int>(node_coords[d].size()) + idx[d];
  return flat;
}

Eigen::VectorXd JacobianGrid::node_theta(const std::vector<int>& idx) const {
  Eigen::VectorXd th(dim());
  for (int d = 0; d < dim(); ++d) th[d] = node_coords[d][idx[d]];
  return th;
}

SensitivityMatrix interpolate(const JacobianGrid& grid, const Eigen::VectorXd& theta_reduced) {
  const int d = grid.dim();
  if (theta_reduced.size() != d)
    throw ShapeMismatch("interpolate: query dimension mismatch");
  constexpr double tol = 1e-12;

  std::vector<int> cell(d);       // lower corner index per dim
  std::vector<double> frac(d);    // weight of the upper corner
  for (int k = 0; k < d; ++k) {
    const auto& c = grid.node_coords[k];
    const double t = theta_reduced[k];
    if (t < c.front() - tol || t > c.back() + tol)
      throw OutOfGridBounds("interpolate: theta outside the grid box");
    // last cell whose lower corner is <= t
    int i = static_cast<int>(std::upper_bound(c.begin(), c.end(), t) - c.begin()) - 1;
    i = std::clamp(i, 0, static_cast<int>(c.size()) - 2);
    cell[k] = i;
    frac[k] = (t - c[i]) / (c[i + 1] - c[i]);
    frac[k] = std::clamp(frac[k], 0.0, 1.0);
  }

  SensitivityMatrix out;
  out.theta_at = theta_reduced;
  const auto shape_rows = grid.payload.empty() ? 0 : grid.payload.front().rows();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(shape_rows, d);

  std::vector<int> idx(d);
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      const bool upper = (corner >> k) & 1;
      idx[k] = cell[k] + (upper ? 1 : 0);
      w *= upper ? frac[k] : (1.0 - frac[k]);
    }
    const int flat = grid.node_index(idx);
    if (!grid.valid[flat])
      throw MissingCorner("interpolate: cell corner has no stored matrix");
    acc += w * grid.payload[flat];
  }
  out.d = acc;
  return out;
}

Eigen::VectorXd homotopy_approx(const Eigen::VectorXd& u_star, const Eigen::VectorXd& theta0,
                                const Eigen::VectorXd& theta1, const HomotopyConfig& cfg,
                                const JacProvider& jac) {
  if (theta0.size() != theta1.size())
    throw ShapeMismatch("homotopy_approx: theta dimensions disagree");
  if (cfg.steps < 1) throw ConfigError("homotopy_approx: steps must be >= 1");
  const double h = 1.0 / cfg.steps;
  const Eigen::VectorXd dtheta = theta1 - theta0;
  Eigen::VectorXd u = u_star;
  for (int m = 0; m < cfg.steps; ++m) {
    const Eigen::VectorXd theta_m = theta0 + (m * h) * dtheta;
    const Eigen::MatrixXd D = jac(u, theta_m);
    if (D.cols() != dtheta.size() || D.rows() != u.size())
      throw ShapeMismatch("homotopy_approx: provider matrix shape mismatch");
    u += h * (D * dtheta);
  }
  return u.cwiseMax(-cfg.u_bound).cwiseMin(cfg.u_bound);
}

Eigen::VectorXd linear_approx(const Eigen::VectorXd& u_star, const SensitivityMatrix& d,
                              const Eigen::VectorXd& theta0, const Eigen::VectorXd& theta1,
                              double u_bound) {
  HomotopyConfig cfg;
  cfg.steps = 1;
  cfg.u_bound = u_bound;
  return homotopy_approx(u_star, theta0, theta1, cfg,
                         [&d](const Eigen::VectorXd&, const Eigen::VectorXd&) { return d.d; });
}

JacProvider grid_provider(const JacobianGrid& grid) {
  return [&grid](const Eigen::VectorXd&, const Eigen::VectorXd& theta) {
    return interpolate(grid, theta).d;
  };
}

JacProvider direct_provider(const GradFn& grad, const HdsaConfig& cfg) {
  return [grad, cfg](const Eigen::VectorXd& u, const Eigen::VectorXd& theta) {
    return hdsa_at(grad, u, theta, cfg).d;
  };
}

JacobianGrid build_jacobian_grid(const ProblemSpec& spec, const ThetaVector& base,
                                 const Eigen::VectorXd& nominal_u,
                                 const std::vector<int>& dims,
                                 const GridBuildSettings& settings) {
  if (dims.empty()) throw EmptyImportantSet("build_jacobian_grid: no reduced dimensions");
  const int m = settings.nodes_per_dim;
  if (m < 2) throw ConfigError("build_jacobian_grid: need at least 2 nodes per dim");
  const int d = static_cast<int>(dims.size());
  const int P = base.dim();

  JacobianGrid grid;
  grid.dims = dims;
  grid.node_coords.assign(d, {});
  for (auto& c : grid.node_coords) {
    c.resize(m);
    for (int i = 0; i < m; ++i) c[i] = -1.0 + 2.0 * i / (m - 1);
  }
  const int n_nodes = grid.n_nodes();
  grid.payload.assign(n_nodes, Eigen::MatrixXd());
  grid.valid.assign(n_nodes, 0);
  grid.nominal_u = nominal_u;
  grid.beta0 = base.beta0;
  grid.nominal_p = base.nominal;
  grid.N = spec.control_grid.n_steps;
  grid.t0 = spec.control_grid.t0;
  grid.T = spec.control_grid.T;

  const GradFn grad = gradient_fn(spec, base);
  const CostFn costf = cost_fn(spec, base);

  // Enumerate nodes ordered by L1 index distance from the center so each
  // solve can warm start from an already-solved neighbor one step inward.
  std::vector<std::vector<int>> idx_of(n_nodes, std::vector<int>(d));
  {
    std::vector<int> idx(d, 0);
    for (int flat = 0; flat < n_nodes; ++flat) {
      idx_of[flat] = idx;
      for (int k = d - 1; k >= 0; --k) {
        if (++idx[k] < m) break;
        idx[k] = 0;
      }
    }
  }
  const int center = (m - 1) / 2;
  auto l1_center = [&](const std::vector<int>& idx) {
    int s = 0;
    for (int k = 0; k < d; ++k) s += std::abs(idx[k] - center);
    return s;
  };
  std::vector<int> order(n_nodes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return l1_center(idx_of[a]) < l1_center(idx_of[b]); });

  std::vector<Eigen::VectorXd> solved_u(n_nodes);
  for (int flat : order) {
    const auto& idx = idx_of[flat];
    // warm start: neighbor one step toward the center in the first off-center dim
    Eigen::VectorXd u0 = nominal_u;
    for (int k = 0; k < d; ++k) {
      if (idx[k] != center) {
        std::vector<int> nb = idx;
        nb[k] += (idx[k] < center) ? 1 : -1;
        const int nb_flat = grid.node_index(nb);
        if (grid.valid[nb_flat]) u0 = solved_u[nb_flat];
        break;
      }
    }

    Eigen::VectorXd theta_full = Eigen::VectorXd::Zero(P);
    for (int k = 0; k < d; ++k) theta_full[dims[k]] = grid.node_coords[k][idx[k]];

    bool ok = false;
    try {
      OptimizerConfig oc = settings.opt;
      OptimReport rep = minimize_restarted(
          [&](const Eigen::VectorXd& u) { return costf(u, theta_full); },
          [&](const Eigen::VectorXd& u) { return grad(u, theta_full); }, u0, oc,
          settings.h0_inv, 2, settings.hdsa.step_u);
      if (rep.converged || rep.grad_norm <= 10.0 * oc.grad_tol) {
        SensitivityMatrix sm = hdsa_at(grad, rep.u, theta_full, settings.hdsa);
        Eigen::MatrixXd reduced(sm.d.rows(), d);
        for (int k = 0; k < d; ++k) reduced.col(k) = sm.d.col(dims[k]);
        grid.payload[flat] = std::move(reduced);
        solved_u[flat] = rep.u;
        grid.valid[flat] = 1;
        ok = true;
      }
    } catch (const Error&) {
      // node recorded as missing
    }
    if (settings.on_node) settings.on_node(flat, ok);
  }
  return grid;
}

}  // namespace replan

#ifndef REPLAN_APPROX_HPP
#define REPLAN_APPROX_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "replan/gsa.hpp"
#include "replan/hdsa.hpp"
#include "replan/optimizer.hpp"
#include "replan/problem.hpp"

namespace replan {

/// Regular mesh over the reduced theta hypercube, one sensitivity matrix
/// (reduced columns only) per node, with multilinear interpolation.
struct JacobianGrid {
  std::vector<int> dims;                         // reduced parameter indices
  std::vector<std::vector<double>> node_coords;  // per dim, sorted, endpoints -1 and 1
  std::vector<Eigen::MatrixXd> payload;          // (N+1) x dims.size(), node row-major
  std::vector<std::uint8_t> valid;               // per node; 0 = solve failed
  Eigen::VectorXd nominal_u;                     // controller at theta = 0

  // Creation settings.
  double beta0 = 0.1;
  Eigen::VectorXd nominal_p;
  int N = 0;       // controller intervals
  double t0 = 0.0;
  double T = 0.0;

  int dim() const { return static_cast<int>(dims.size()); }
  int n_nodes() const;
  /// Row-major flattening of a per-dim index vector.
  int node_index(const std::vector<int>& idx) const;
  /// Reduced theta coordinates of a node.
  Eigen::VectorXd node_theta(const std::vector<int>& idx) const;
};

/// Entrywise multilinear interpolation over the enclosing cell.
/// theta_reduced must lie in [-1,1]^dims; all 2^d cell corners must be valid.
SensitivityMatrix interpolate(const JacobianGrid& grid, const Eigen::VectorXd& theta_reduced);

/// Supplies D(u, theta) along the homotopy path. theta has the dimension the
/// caller steps over (reduced or full).
using JacProvider =
    std::function<Eigen::MatrixXd(const Eigen::VectorXd& u, const Eigen::VectorXd& theta)>;

struct HomotopyConfig {
  int steps = 16;  // M_h; 1 reduces to the Taylor step
  double u_bound = M_PI / 2.0;
};

/// First-order Taylor step u* + D (theta1 - theta0), clamped to the box.
Eigen::VectorXd linear_approx(const Eigen::VectorXd& u_star, const SensitivityMatrix& d,
                              const Eigen::VectorXd& theta0, const Eigen::VectorXd& theta1,
                              double u_bound = M_PI / 2.0);

/// Forward-Euler homotopy over theta(t) = theta0 + t (theta1 - theta0):
/// u_{m+1} = u_m + h D(u_m, theta(t_m)) (theta1 - theta0), h = 1/steps,
/// final clamp to the box. With steps = 1 this is bit-identical to
/// linear_approx given the same D.
Eigen::VectorXd homotopy_approx(const Eigen::VectorXd& u_star, const Eigen::VectorXd& theta0,
                                const Eigen::VectorXd& theta1, const HomotopyConfig& cfg,
                                const JacProvider& jac);

/// Grid-backed provider (ignores u; columns ordered per grid.dims).
JacProvider grid_provider(const JacobianGrid& grid);

/// Direct provider: H, B recomputed at the current iterate (no optimization).
/// theta passed to the provider is the full-dimension vector.
JacProvider direct_provider(const GradFn& grad, const HdsaConfig& cfg = {});

struct GridBuildSettings {
  int nodes_per_dim = 5;
  OptimizerConfig opt;
  HdsaConfig hdsa;
  /// Optional inverse-Hessian seed for the warm-started node solves.
  const Eigen::MatrixXd* h0_inv = nullptr;
  /// Called after each node solve with (node flat index, converged).
  std::function<void(int, bool)> on_node;
};

/// Builds the grid over the screening's important dimensions: at each node,
/// freeze non-important coordinates at 0, re-optimize from the nearest solved
/// neighbor (nominal node first), run HDSA, keep the reduced columns.
JacobianGrid build_jacobian_grid(const ProblemSpec& spec, const ThetaVector& base,
                                 const Eigen::VectorXd& nominal_u,
                                 const std::vector<int>& dims,
                                 const GridBuildSettings& settings);

/// Single binary file with magic "RJGD" and a trailing 64-bit checksum.
void save_grid(const JacobianGrid& grid, const std::string& path);
JacobianGrid load_grid(const std::string& path);

}  // namespace replan

#endif  // REPLAN_APPROX_HPP

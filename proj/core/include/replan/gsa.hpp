#ifndef REPLAN_GSA_HPP
#define REPLAN_GSA_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "replan/hdsa.hpp"

namespace replan {

/// Deterministic Sobol low-discrepancy points mapped to [-1,1]^P, one row per
/// point. The first point is the sequence origin. Supports up to 24
/// dimensions; throws DimensionTooLarge beyond that.
Eigen::MatrixXd qmc_samples(int P, int M);

/// Maximum supported QMC dimension.
int qmc_max_dimension();

/// DGSM per parameter: N_j = (1/M) sum_k sum_i (d u*_i / d theta_j at k)^2.
Eigen::VectorXd dgsm_estimate(const std::vector<SensitivityMatrix>& d_samples);

/// Sobol total-index upper bounds for iid U(a,b) inputs:
/// bound_j = ((b-a)^2 / pi^2) * N_j / tr(Gamma).
Eigen::VectorXd sobol_upper_bound(const Eigen::VectorXd& dgsm, double trace_gamma,
                                  double a = -1.0, double b = 1.0);

/// Sum over coefficients of the unbiased sample variance across points.
double trace_covariance(const std::vector<Eigen::VectorXd>& u_samples);

struct ScreeningReport {
  Eigen::VectorXd dgsm;    // N_j per parameter
  Eigen::VectorXd bounds;  // Sobol upper bounds
  double trace_gamma = 0.0;
  std::vector<int> important;  // indices with bound > threshold
  std::vector<int> ranking;    // all indices, descending bound
  double threshold = 0.1;
  int samples_used = 0;
  std::vector<std::string> param_names;

  std::string to_json() const;
  static ScreeningReport from_json(const std::string& text);
};

/// Assembles the report: bounds from DGSMs, important set by threshold,
/// descending-bound ranking.
ScreeningReport screen(const Eigen::VectorXd& dgsm, double trace_gamma, double threshold,
                       int samples_used, std::vector<std::string> param_names = {});

}  // namespace replan

#endif  // REPLAN_GSA_HPP

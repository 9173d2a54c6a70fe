#ifndef REPLAN_THETA_HPP
#define REPLAN_THETA_HPP

#include <Eigen/Core>

#include "replan/errors.hpp"

namespace replan {

/// Nondimensionalized parameter vector: p_i = (1 + beta0 * theta_i) * nominal_i,
/// with theta in [-1, 1]^P.
struct ThetaVector {
  Eigen::VectorXd theta;    // dimensionless, in [-1, 1]^P
  Eigen::VectorXd nominal;  // problem units
  double beta0 = 0.1;

  ThetaVector() = default;
  ThetaVector(Eigen::VectorXd th, Eigen::VectorXd nom, double b0)
      : theta(std::move(th)), nominal(std::move(nom)), beta0(b0) {
    if (theta.size() != nominal.size())
      throw ShapeMismatch("ThetaVector: theta and nominal sizes differ");
    if (!(beta0 > 0.0)) throw ConfigError("ThetaVector: beta0 must be positive");
  }

  int dim() const { return static_cast<int>(theta.size()); }

  bool in_box(double slack = 0.0) const {
    return (theta.array().abs() <= 1.0 + slack).all();
  }

  /// Same nominal/beta0, different theta.
  ThetaVector with_theta(const Eigen::VectorXd& th) const {
    return ThetaVector(th, nominal, beta0);
  }
};

/// p_i = (1 + beta0 * theta_i) * nominal_i componentwise.
inline Eigen::VectorXd dimensionalize(const ThetaVector& tv) {
  return ((1.0 + tv.beta0 * tv.theta.array()) * tv.nominal.array()).matrix();
}

/// Inverse of dimensionalize: theta_i = (p_i / nominal_i - 1) / beta0.
inline Eigen::VectorXd nondimensionalize(const Eigen::VectorXd& p, const ThetaVector& tv) {
  return ((p.array() / tv.nominal.array() - 1.0) / tv.beta0).matrix();
}

}  // namespace replan

#endif  // REPLAN_THETA_HPP

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vague/law.hpp"

namespace vague {

/// A C^1 map R^k -> R^m with a caller-supplied exact Jacobian.
struct SmoothMap {
  std::string name;
  Eigen::Index dim_in = 1;
  Eigen::Index dim_out = 1;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> evaluate;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
};

/// Central finite differences of map.evaluate at theta.
Eigen::MatrixXd finite_difference_jacobian(const SmoothMap& map, const Eigen::VectorXd& theta);

/// Throws JacobianMismatch unless the supplied Jacobian matches central
/// finite differences entrywise within rel_tol * max(1, |J_ij|).
void verify_jacobian(const SmoothMap& map, const Eigen::VectorXd& theta, double rel_tol = 1e-6);

/// Builtins: "square", "inverse", "log", "exp" act coordinatewise on R^k;
/// "ratio" is (x, y) -> x / y.
SmoothMap builtin_map(const std::string& name, Eigen::Index dim = 1);
std::vector<std::string> builtin_map_names();

/// (g'(theta))^2 * limit_var.
double delta_univariate(double gprime_at_theta, double limit_var);

/// grad' Sigma grad.
double delta_gradient(const Eigen::VectorXd& grad, const Eigen::MatrixXd& sigma);

/// J Sigma J', symmetrized.
Eigen::MatrixXd delta_jacobian(const Eigen::MatrixXd& jacobian, const Eigen::MatrixXd& sigma);

struct DeltaReport {
  Eigen::MatrixXd predicted_cov;
  Eigen::MatrixXd empirical_cov;
  double max_abs_err = 0.0;
  /// Largest |empirical - predicted| / |predicted| over entries with
  /// |predicted| > 1e-12; 0 when every predicted entry vanishes.
  double max_rel_err = 0.0;
  /// sqrt(n)(g(mean_n) - g(theta)) per replicate, row-major reps x m.
  Eigen::MatrixXd replicates;
};

/// Simulates sqrt(n)(g(X_bar_n) - g(theta)) where coordinate j of each
/// observation is drawn independently from base_laws[j], and compares the
/// replicate covariance to J(theta) diag(Var) J(theta)'. theta must equal
/// the vector of base-law means.
DeltaReport mc_delta_verify(const SmoothMap& map, const Eigen::VectorXd& theta,
                            std::span<const Law> base_laws, std::int64_t n, std::int64_t reps,
                            std::uint64_t seed, unsigned threads = 0);

}  // namespace vague

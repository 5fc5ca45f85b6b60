#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

#include "vague/law.hpp"
#include "vague/quantile.hpp"
#include "vague/sampling.hpp"

namespace vague {

/// Point masses on a sorted, distinct support. `remainder` bounds the mass
/// cut from an infinite support when the table was tabulated from a law.
struct DiscreteLawTable {
  std::vector<double> support;
  std::vector<double> masses;
  double remainder = 0.0;

  /// Throws DomainError unless masses >= 0, sum to 1 within 1e-12 and the
  /// support is strictly increasing.
  void validate() const;
};

/// Table of a discrete catalog law (its tabulated support).
DiscreteLawTable discrete_table(const Law& law);

/// Empirical distribution function: jump (multiplicity)/n at each value.
StepCdf ecdf(const OrderedSample& sample);

/// sup_x |F_n(x) - F(x)| via the order-statistic formula
/// max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n). Sorted input.
double ks_distance(std::span<const double> sorted, const Law& F);
double ks_distance(const OrderedSample& sample, const Law& F);

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(std::span<const double> sorted_a, std::span<const double> sorted_b);

/// 1/2 * sum |p - q| over the merged support, plus half of both tables'
/// truncation remainders (zero for exact tables).
double tv_distance(const DiscreteLawTable& p, const DiscreteLawTable& q);

/// Unbiased sample covariance of the rows of an R x k matrix, R >= 2.
Eigen::MatrixXd empirical_cov(const Eigen::MatrixXd& replicates);

/// (1/n) sum exp(i u X_j).
std::complex<double> empirical_cf(std::span<const double> sample, double u);
std::complex<double> empirical_cf(const OrderedSample& sample, double u);

}  // namespace vague

#pragma once

#include <span>
#include <vector>

namespace vague {

/// Finite-jump, right-continuous, nondecreasing distribution function.
///
/// Stored as jump locations with the cumulative level reached at each jump,
/// so evaluation and generalized inversion are both binary searches.
class StepCdf {
 public:
  /// Validates: jumps strictly increasing, levels strictly increasing in
  /// (0,1], final level 1 within 1e-12 (snapped to exactly 1).
  StepCdf(std::vector<double> jump_points, std::vector<double> cum_values);

  /// Builds from point masses; zero masses are dropped, masses are summed
  /// left to right. Support must be strictly increasing.
  static StepCdf from_masses(std::span<const double> support,
                             std::span<const double> masses);

  static StepCdf point_mass(double at);

  const std::vector<double>& jump_points() const { return jumps_; }
  const std::vector<double>& cum_values() const { return levels_; }
  std::size_t size() const { return jumps_.size(); }

  /// F(x): level of the last jump at or before x, 0 before the first jump.
  double operator()(double x) const;

 private:
  std::vector<double> jumps_;
  std::vector<double> levels_;
};

double step_cdf_eval(const StepCdf& F, double x);

/// inf{x : F(x) >= u} for u in (0,1]. At u = 1 this is the last jump point.
double generalized_inverse(const StepCdf& F, double u);

/// F(x-) = sup of F strictly left of x.
double left_limit(const StepCdf& F, double x);

/// Breakpoints t_0 < ... < t_{k+1} built from t_i = F^{-1}(i*eps) with
/// k = floor(1/eps), t_0 the lower end of the support and t_{k+1} =
/// F^{-1}(1). Each open interval (t_i, t_{i+1}) carries mass at most eps.
/// Repeated breakpoints (atoms heavier than eps) are merged.
std::vector<double> epsilon_partition(const StepCdf& F, double eps);

}  // namespace vague

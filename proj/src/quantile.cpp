#include "vague/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vague/errors.hpp"
#include "vague/law.hpp"

namespace vague {

StepCdf::StepCdf(std::vector<double> jump_points, std::vector<double> cum_values)
    : jumps_(std::move(jump_points)), levels_(std::move(cum_values)) {
  if (jumps_.empty() || jumps_.size() != levels_.size()) {
    throw DomainError("StepCdf: need equally sized, nonempty jump and level vectors");
  }
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    if (!std::isfinite(jumps_[i])) throw DomainError("StepCdf: jump points must be finite");
    if (!(levels_[i] > 0.0 && levels_[i] <= 1.0 + 1e-12)) {
      throw DomainError("StepCdf: levels must lie in (0,1]");
    }
    if (i > 0 && !(jumps_[i] > jumps_[i - 1])) {
      throw DomainError("StepCdf: jump points must be strictly increasing");
    }
    if (i > 0 && !(levels_[i] > levels_[i - 1])) {
      throw DomainError("StepCdf: levels must be strictly increasing");
    }
  }
  if (std::abs(levels_.back() - 1.0) > 1e-12) {
    throw DomainError("StepCdf: final level must be 1, got " + std::to_string(levels_.back()));
  }
  levels_.back() = 1.0;
  if (levels_.size() > 1 && !(levels_[levels_.size() - 2] < 1.0)) {
    throw DomainError("StepCdf: levels must be strictly increasing");
  }
}

StepCdf StepCdf::from_masses(std::span<const double> support, std::span<const double> masses) {
  if (support.size() != masses.size()) throw ShapeError("StepCdf: support/mass size mismatch");
  std::vector<double> jumps;
  std::vector<double> levels;
  double acc = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (masses[i] < 0.0) throw DomainError("StepCdf: negative mass");
    if (i > 0 && !(support[i] > support[i - 1])) {
      throw DomainError("StepCdf: support must be strictly increasing");
    }
    const double next = std::min(acc + masses[i], 1.0);
    if (next > acc) {
      jumps.push_back(support[i]);
      levels.push_back(next);
      acc = next;
    }
  }
  if (!levels.empty() && std::abs(levels.back() - 1.0) <= 1e-12) {
    // Rounding in the running sum can leave a final plateau just under 1;
    // the last positive-mass point closes the distribution.
    levels.back() = 1.0;
    while (levels.size() > 1 && levels[levels.size() - 2] >= 1.0) {
      levels.erase(levels.end() - 2);
      jumps.erase(jumps.end() - 2);
    }
  }
  return StepCdf(std::move(jumps), std::move(levels));
}

StepCdf StepCdf::point_mass(double at) { return StepCdf({at}, {1.0}); }

double StepCdf::operator()(double x) const {
  // Last jump <= x.
  const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), x);
  if (it == jumps_.begin()) return 0.0;
  return levels_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

double step_cdf_eval(const StepCdf& F, double x) { return F(x); }

double generalized_inverse(const StepCdf& F, double u) {
  if (!(u > 0.0 && u <= 1.0)) {
    throw DomainError("generalized_inverse: u must lie in (0,1], got " + std::to_string(u));
  }
  const auto& levels = F.cum_values();
  // First jump whose level reaches u; the leftmost one realizes the inf.
  const auto it = std::lower_bound(levels.begin(), levels.end(), u);
  return F.jump_points()[static_cast<std::size_t>(it - levels.begin())];
}

double left_limit(const StepCdf& F, double x) {
  const auto& jumps = F.jump_points();
  // Last jump strictly < x.
  const auto it = std::lower_bound(jumps.begin(), jumps.end(), x);
  if (it == jumps.begin()) return 0.0;
  return F.cum_values()[static_cast<std::size_t>(it - jumps.begin()) - 1];
}

namespace {

template <typename Lower, typename Inverse, typename Upper>
std::vector<double> partition_impl(double eps, Lower lower, Inverse inverse, Upper upper) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError("epsilon_partition: eps must lie in (0,1), got " + std::to_string(eps));
  }
  const auto k = static_cast<long>(std::floor(1.0 / eps));
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(k) + 2);
  t.push_back(lower());
  for (long i = 1; i <= k; ++i) {
    const double s = static_cast<double>(i) * eps;
    t.push_back(s >= 1.0 ? upper() : inverse(s));
  }
  t.push_back(upper());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

}  // namespace

std::vector<double> epsilon_partition(const StepCdf& F, double eps) {
  return partition_impl(
      eps, [&] { return F.jump_points().front(); },
      [&](double s) { return generalized_inverse(F, s); },
      [&] { return F.jump_points().back(); });
}

std::vector<double> epsilon_partition(const Law& law, double eps) {
  return partition_impl(
      eps, [&] { return law.support_lower(); }, [&](double s) { return quantile(law, s); },
      [&] { return law.support_upper(); });
}

std::vector<double> epsilon_partition(const Distribution& d, double eps) {
  return std::visit([eps](const auto& F) { return epsilon_partition(F, eps); }, d);
}

}  // namespace vague

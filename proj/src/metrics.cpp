#include "vague/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "vague/errors.hpp"

namespace vague {

void DiscreteLawTable::validate() const {
  if (support.size() != masses.size() || support.empty()) {
    throw DomainError("DiscreteLawTable: support and masses must be nonempty and equally sized");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!(masses[i] >= 0.0)) throw DomainError("DiscreteLawTable: negative mass");
    if (i > 0 && !(support[i] > support[i - 1])) {
      throw DomainError("DiscreteLawTable: support must be sorted and distinct");
    }
    total += masses[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("DiscreteLawTable: masses must sum to 1");
}

DiscreteLawTable discrete_table(const Law& law) {
  if (!law.is_discrete()) throw ContinuityRequired("discrete_table: " + law.spec() + " is continuous");
  return {law.table_support(), law.table_masses(), law.truncation_remainder()};
}

StepCdf ecdf(const OrderedSample& sample) {
  const auto& x = sample.values();
  if (x.empty()) throw DomainError("ecdf: empty sample");
  const double n = static_cast<double>(x.size());
  std::vector<double> jumps;
  std::vector<double> levels;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i + 1 < x.size() && x[i + 1] == x[i]) continue;
    jumps.push_back(x[i]);
    levels.push_back(static_cast<double>(i + 1) / n);
  }
  return StepCdf(std::move(jumps), std::move(levels));
}

double ks_distance(std::span<const double> sorted, const Law& F) {
  if (F.is_discrete()) {
    throw ContinuityRequired("ks_distance: " + F.spec() + " is discrete; use tv_distance");
  }
  if (sorted.empty()) throw DomainError("ks_distance: empty sample");
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw DomainError("ks_distance: sample must be sorted");
  }
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double Fx = cdf(F, sorted[i]);
    const double above = static_cast<double>(i + 1) / n - Fx;
    const double below = Fx - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

double ks_distance(const OrderedSample& sample, const Law& F) {
  return ks_distance(sample.view(), F);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double tv_distance(const DiscreteLawTable& p, const DiscreteLawTable& q) {
  p.validate();
  q.validate();
  std::size_t i = 0, j = 0;
  double sum = 0.0;
  while (i < p.support.size() || j < q.support.size()) {
    if (j == q.support.size() || (i < p.support.size() && p.support[i] < q.support[j])) {
      sum += p.masses[i++];
    } else if (i == p.support.size() || q.support[j] < p.support[i]) {
      sum += q.masses[j++];
    } else {
      sum += std::abs(p.masses[i++] - q.masses[j++]);
    }
  }
  return std::min(1.0, 0.5 * (sum + p.remainder + q.remainder));
}

Eigen::MatrixXd empirical_cov(const Eigen::MatrixXd& replicates) {
  const auto rows = replicates.rows();
  if (rows < 2) throw DomainError("empirical_cov: need at least 2 replicates");
  const Eigen::RowVectorXd mean = replicates.colwise().mean();
  const Eigen::MatrixXd centered = replicates.rowwise() - mean;
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(rows - 1);
  return 0.5 * (cov + cov.transpose());
}

std::complex<double> empirical_cf(std::span<const double> sample, double u) {
  if (sample.empty()) throw DomainError("empirical_cf: empty sample");
  double re = 0.0, im = 0.0;
  for (double x : sample) {
    re += std::cos(u * x);
    im += std::sin(u * x);
  }
  const double n = static_cast<double>(sample.size());
  return {re / n, im / n};
}

std::complex<double> empirical_cf(const OrderedSample& sample, double u) {
  return empirical_cf(sample.view(), u);
}

}  // namespace vague

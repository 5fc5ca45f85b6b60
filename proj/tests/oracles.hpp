#pragma once

// Slow, direct reference computations used to cross-check the library.
// None of these call into vague.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

namespace oracle {

/// F(x) = sum of masses at points <= x, by linear scan.
inline double cdf_scan(const std::vector<double>& pts, const std::vector<double>& masses, double x) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i] <= x) s += masses[i];
  }
  return s;
}

/// inf{x : F(x) >= u} by scanning the jump points from the left.
inline double inverse_scan(const std::vector<double>& jumps, const std::vector<double>& levels, double u) {
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    if (levels[i] >= u) return jumps[i];
  }
  return std::numeric_limits<double>::infinity();
}

/// max over all 2^m events B of |P(B) - Q(B)| on a common support.
inline double tv_by_events(const std::vector<double>& p, const std::vector<double>& q) {
  const std::size_t m = p.size();
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double d = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) d += p[i] - q[i];
    }
    best = std::max(best, std::abs(d));
  }
  return best;
}

/// Binomial(n, p) masses by convolving n Bernoulli(p) laws.
inline std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
  w[0] = 1.0;
  for (int t = 1; t <= n; ++t) {
    for (int k = t; k >= 1; --k) w[k] = w[k] * (1.0 - p) + w[k - 1] * p;
    w[0] *= 1.0 - p;
  }
  return w;
}

/// Poisson(lambda) masses on 0..kmax from e^{-lambda} lambda^k / k!.
inline std::vector<double> poisson_pmf(double lambda, int kmax) {
  std::vector<double> w(static_cast<std::size_t>(kmax) + 1);
  long double term = std::exp(-static_cast<long double>(lambda));
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) term *= static_cast<long double>(lambda) / k;
    w[k] = static_cast<double>(term);
  }
  return w;
}

/// C(M,k) C(N-M,n-k) / C(N,n) as a product of ratios in long double.
inline double hypergeometric_pmf(std::int64_t N, std::int64_t M, std::int64_t n, std::int64_t k) {
  if (k < std::max<std::int64_t>(0, n - (N - M)) || k > std::min(n, M)) return 0.0;
  auto log_choose = [](std::int64_t a, std::int64_t b) {
    return std::lgamma(static_cast<long double>(a) + 1) - std::lgamma(static_cast<long double>(b) + 1) -
           std::lgamma(static_cast<long double>(a - b) + 1);
  };
  return static_cast<double>(std::exp(log_choose(M, k) + log_choose(N - M, n - k) - log_choose(N, n)));
}

/// 1/2 sum |p - q| with both vectors indexed by the same integer support.
inline double half_l1(std::vector<double> p, std::vector<double> q) {
  const std::size_t m = std::max(p.size(), q.size());
  p.resize(m, 0.0);
  q.resize(m, 0.0);
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// sup_x |F_n(x) - F(x)| checked at every sample point from both sides.
template <typename Cdf>
double ks_scan(std::vector<double> x, Cdf F) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::size_t below = 0, upto = 0;
    for (double y : x) {
      below += y < x[i];
      upto += y <= x[i];
    }
    best = std::max(best, std::abs(upto / n - F(x[i])));
    best = std::max(best, std::abs(below / n - F(x[i])));
  }
  return best;
}

/// Unbiased covariance by the two-pass definition.
inline std::vector<std::vector<double>> covariance(const std::vector<std::vector<double>>& rows) {
  const std::size_t R = rows.size(), k = rows[0].size();
  std::vector<double> mean(k, 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < k; ++j) mean[j] += r[j] / R;
  }
  std::vector<std::vector<double>> c(k, std::vector<double>(k, 0.0));
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) c[i][j] += (r[i] - mean[i]) * (r[j] - mean[j]) / (R - 1.0);
    }
  }
  return c;
}

/// Random finite distribution: m distinct sorted points with positive masses.
struct RandomStep {
  std::vector<double> points;
  std::vector<double> masses;
  std::vector<double> levels;
};

inline RandomStep random_step(std::mt19937_64& gen, std::size_t max_points) {
  std::uniform_int_distribution<std::size_t> size(1, max_points);
  std::uniform_int_distribution<int> lattice(-50, 50);
  const std::size_t m = size(gen);
  std::map<double, double> atoms;
  std::exponential_distribution<double> weight(1.0);
  while (atoms.size() < m) atoms[lattice(gen) * 0.25] = weight(gen);
  RandomStep s;
  double total = 0.0;
  for (const auto& [x, w] : atoms) total += w;
  double acc = 0.0;
  for (const auto& [x, w] : atoms) {
    s.points.push_back(x);
    s.masses.push_back(w / total);
    acc += w / total;
    s.levels.push_back(acc);
  }
  s.levels.back() = 1.0;
  return s;
}

}  // namespace oracle

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vague/law.hpp"
#include "vague/limits.hpp"
#include "vague/rng.hpp"

namespace vague {

/// One observation Z_i. Univariate experiments leave y at 0.
struct Observation {
  double x = 0.0;
  double y = 0.0;
};

/// Real statistic f(Z). When f is a polynomial in x its coefficients are
/// kept (lowest degree first) so moments can be looked up exactly.
class Statistic {
 public:
  Statistic(std::string label, std::function<double(const Observation&)> fn);

  static Statistic polynomial(std::vector<double> coeffs, std::string label = {});
  static Statistic constant(double c);
  /// x^k.
  static Statistic power(int k);
  static Statistic first() { return power(1); }
  static Statistic second_coordinate();

  /// a f + b g, pointwise.
  static Statistic linear(double a, const Statistic& f, double b, const Statistic& g);

  double operator()(const Observation& z) const { return fn_(z); }
  double operator()(double x) const { return fn_(Observation{x, 0.0}); }

  const std::string& label() const { return label_; }
  const std::optional<std::vector<double>>& coefficients() const { return coeffs_; }

 private:
  std::string label_;
  std::function<double(const Observation&)> fn_;
  std::optional<std::vector<double>> coeffs_;
};

/// Parses "x", "x2", "x3", ... into power statistics.
Statistic parse_statistic(const std::string& name);

/// E X^k for catalog laws with closed-form moments (Gaussian,
/// Exponential1, Uniform01, Beta, Pareto with alpha > k); otherwise throws
/// MomentUnavailable.
double raw_moment(const Law& law, int k);

/// E f(X) for a polynomial statistic; throws MomentUnavailable otherwise.
double expectation(const Statistic& f, const Law& law);

/// n^{-1/2} sum (f(Z_i) - mean_f).
double fep_evaluate(std::span<const Observation> sample, const Statistic& f, double mean_f);

/// Gamma(f,g) = E[(f - Ef)(g - Eg)], exact from moments for polynomial
/// statistics; throws MomentUnavailable otherwise.
double gamma_cov(const Statistic& f, const Statistic& g, const Law& law);

/// Unbiased sample estimate of Gamma(f,g).
double gamma_cov(const Statistic& f, const Statistic& g, std::span<const Observation> sample);

struct GammaEstimate {
  double value;
  bool exact;
  /// 3/sqrt(n) for sample estimates, 0 when exact.
  double noise_bound;
};

/// Exact when possible, otherwise estimated from `sample`; throws
/// MomentUnavailable when neither route is available.
GammaEstimate gamma_cov(const Statistic& f, const Statistic& g, const Law& law,
                        std::span<const Observation> sample);

/// N_k(0, [Gamma(f_i, f_j)]).
GaussianLimit fidi_limit(std::span<const Statistic> fs, const Law& law);

/// A_n = constant + n^{-1/2} G_n(influence) + o_P(n^{-1/2}).
struct Expansion {
  double constant;
  Statistic influence;
};

Expansion expansion_sum(const Expansion& a, const Expansion& b);
/// (AB, B L + A H).
Expansion expansion_product(const Expansion& a, const Expansion& b);
/// (A/B, L/B - A H / B^2); throws DivisionByZeroConstant when B = 0.
Expansion expansion_quotient(const Expansion& a, const Expansion& b);

/// Plug-in (sample) linear correlation.
double plugin_correlation(std::span<const Observation> pairs);

/// Centered moments of (X, Y); mu_pq = E (X - mu_x)^p (Y - mu_y)^q.
struct BivariateMoments {
  double mu_x = 0.0;
  double mu_y = 0.0;
  double sigma2_x = 1.0;
  double sigma2_y = 1.0;
  double sigma_xy = 0.0;
  double mu_22 = 1.0;
  double mu_4x = 3.0;
  double mu_4y = 3.0;
  double mu_31 = 0.0;
  double mu_13 = 0.0;

  void validate() const;
  double rho() const;

  /// Standard bivariate Gaussian with correlation rho.
  static BivariateMoments gaussian(double rho);
};

/// Asymptotic variance of sqrt(n)(rho_n - rho).
double correlation_asymptotic_variance(const BivariateMoments& m);

struct BivariateGaussian {
  double rho;
};
struct IndependentPair {
  Law x;
  Law y;
};
using CorrelationLaw = std::variant<BivariateGaussian, IndependentPair>;

/// n pairs drawn from `law` with the given stream.
std::vector<Observation> draw_pairs(const CorrelationLaw& law, RngStream& rng, std::size_t n);

struct CorrelationReport {
  double empirical_var_of_root_n_rho;
  double predicted_sigma2;
  /// Fraction of replicates with |sqrt(n)(rho_n - rho)| > 1.96 sigma.
  double rejection_rate;
  std::vector<double> root_n_deviation;
};

CorrelationReport correlation_experiment(const CorrelationLaw& law, std::int64_t n,
                                         std::int64_t reps, std::uint64_t seed,
                                         unsigned threads = 0);

}  // namespace vague

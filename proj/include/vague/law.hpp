#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vague/errors.hpp"
#include "vague/quantile.hpp"

namespace vague {

enum class LawKind {
  Uniform01,
  Exponential1,
  Pareto,
  Gumbel,
  Frechet,
  WeibullEVT,
  Poisson,
  Binomial,
  Hypergeometric,
  NegBinomial,
  Gaussian,
  Beta,
};

/// Malformed textual law spec.
class LawSpecError : public Error {
 public:
  using Error::Error;
};

/// Parametric probability law with closed-form CDF, mass/density,
/// characteristic function (for a subset of kinds) and quantile.
///
/// Discrete laws carry a tabulated support built once at construction:
/// masses are generated by the pmf ratio recurrence outward from the mode
/// and truncated once they fall below 1e-20 of the modal mass. The CDF and
/// quantile of a discrete law are the StepCdf of that table, which keeps
/// the two exactly Galois-consistent.
///
/// Values are immutable; copies share the table.
class Law {
 public:
  static Law uniform01();
  static Law exponential1();
  static Law pareto(double alpha);
  static Law gumbel();
  static Law frechet(double alpha);
  static Law weibull_evt(double beta);
  static Law poisson(double lambda);
  static Law binomial(std::int64_t n, double p);
  /// Population N, successes M, draws n.
  static Law hypergeometric(std::int64_t N, std::int64_t M, std::int64_t n);
  /// Number of Bernoulli(p) trials needed for k successes (support k, k+1, ...).
  static Law negbinomial(std::int64_t k, double p);
  static Law gaussian(double mu, double sigma2);
  static Law beta(double a, double b);

  LawKind kind() const { return kind_; }
  bool is_discrete() const;

  // Shape/location parameters; meaning depends on kind.
  double alpha() const { return p0_; }        // Pareto, Frechet
  double shape_beta() const { return p0_; }   // WeibullEVT
  double lambda() const { return p0_; }       // Poisson
  double prob() const { return p1_; }         // Binomial, NegBinomial
  std::int64_t trials() const { return static_cast<std::int64_t>(p0_); }     // Binomial n, NegBinomial k
  std::int64_t population() const { return static_cast<std::int64_t>(p0_); }  // Hypergeometric N
  std::int64_t successes() const { return static_cast<std::int64_t>(p1_); }   // Hypergeometric M
  std::int64_t draws() const { return static_cast<std::int64_t>(p2_); }       // Hypergeometric n
  double mu() const { return p0_; }
  double sigma2() const { return p1_; }
  double beta_a() const { return p0_; }
  double beta_b() const { return p1_; }

  double mean() const;
  /// +infinity when the second moment does not exist.
  double variance() const;

  /// inf{x : F(x) > 0} and F^{-1}(1); may be infinite.
  double support_lower() const;
  double support_upper() const;

  /// Tabulated support and masses (discrete kinds only).
  const std::vector<double>& table_support() const;
  const std::vector<double>& table_masses() const;
  /// Bound on the mass cut from the tails of the table.
  double truncation_remainder() const;
  const StepCdf& lattice_cdf() const;

  /// Compact textual spec, e.g. "binom:n=100,p=0.3". Parses back to an
  /// equal law.
  std::string spec() const;

  friend bool operator==(const Law& a, const Law& b) {
    return a.kind_ == b.kind_ && a.p0_ == b.p0_ && a.p1_ == b.p1_ && a.p2_ == b.p2_;
  }

 private:
  struct Table {
    std::vector<double> support;
    std::vector<double> masses;
    double remainder = 0.0;
    StepCdf cdf;
  };

  Law(LawKind kind, double p0, double p1 = 0.0, double p2 = 0.0);
  void tabulate();

  LawKind kind_;
  double p0_;
  double p1_;
  double p2_;
  std::shared_ptr<const Table> table_;
};

double cdf(const Law& law, double x);

/// P(X = x) for discrete kinds (0 off the integer support), Lebesgue
/// density for continuous kinds.
double mass_or_density(const Law& law, double x);

/// E exp(iuX). Closed forms for Gaussian, Poisson, Binomial, Exponential1
/// and Uniform01; other kinds throw UnsupportedCharFun.
std::complex<double> charfun(const Law& law, double u);

/// inf{x : F(x) >= u}, u in (0,1).
double quantile(const Law& law, double u);

/// P(X < x).
double left_limit(const Law& law, double x);

std::vector<double> epsilon_partition(const Law& law, double eps);

/// Grammar: kind ':' key '=' value (',' key '=' value)*. Kinds without
/// parameters may omit the colon ("gumbel").
Law parse_law(std::string_view spec);

/// A law from the catalog or an arbitrary step distribution function.
using Distribution = std::variant<Law, StepCdf>;

double cdf(const Distribution& d, double x);
double quantile(const Distribution& d, double u);
double left_limit(const Distribution& d, double x);
std::vector<double> epsilon_partition(const Distribution& d, double eps);

}  // namespace vague

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vague/law.hpp"

namespace vague {

/// Centered-or-not finite-dimensional Gaussian limit N_k(mean, cov).
struct GaussianLimit {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  /// Throws DomainError unless cov is square, matches mean, is symmetric
  /// within 1e-12 and has eigenvalues >= -1e-10.
  void validate() const;
};

/// True when cov + shift*I admits a Cholesky factorization.
bool cholesky_psd(const Eigen::MatrixXd& cov, double shift = 1e-10);

/// Sigma_ii = 1 - p_i, Sigma_ij = -sqrt(p_i p_j): limit of the coordinates
/// (X_i - n p_i) / sqrt(n p_i) of a multinomial count vector.
GaussianLimit multinomial_clt_covariance(std::span<const double> p);

/// min(t_i, t_j) - t_i t_j on 0 < t_1 < ... < t_k < 1.
GaussianLimit empirical_process_fidis_cov(std::span<const double> t);

/// min(t_i, t_j) on 0 < t_1 < ... < t_k <= 1.
GaussianLimit partial_sum_fidis_cov(std::span<const double> t);

enum class EvtFamily { ExponentialGumbel, ParetoFrechet, UniformWeibull };

/// (M_n - b_n) / a_n converges to `limit` when the sample is drawn from
/// `base`.
struct EvtNormalization {
  double a_n;
  double b_n;
  Law base;
  Law limit;
};

EvtNormalization evt_normalization(EvtFamily family, std::int64_t n, double alpha = 2.0);

enum class ExperimentFamily {
  EvtGumbel,
  EvtFrechet,
  EvtWeibull,
  CltBinomial,
  CltPoisson,
  CltNegBinomial,
  CltIid,
  Multinomial,
  FidisEmpirical,
  FidisPartialSum,
  TvHypBin,
  TvBinPoisson,
  LevyCf,
};

/// CLI name, e.g. "evt-gumbel".
std::string family_name(ExperimentFamily family);
std::optional<ExperimentFamily> family_from_name(std::string_view name);
std::span<const ExperimentFamily> all_families();

/// Seeded Monte Carlo configuration. Fields outside the chosen family are
/// ignored.
struct LimitExperiment {
  ExperimentFamily family = ExperimentFamily::EvtGumbel;
  std::int64_t n = 1;
  std::int64_t reps = 1;
  std::uint64_t seed = 0;

  double alpha = 2.0;              // evt-frechet
  double p = 0.3;                  // clt-binomial, clt-negbinom (k = n)
  double lambda = 0.0;             // clt-poisson (0: lambda = n), tv-bin-poisson
  Law base_law = Law::gaussian(0.0, 1.0);  // clt-iid, fidis-partialsum
  std::vector<double> grid;        // fidis-*
  std::vector<double> probs;       // multinomial
  std::int64_t population = 100;   // tv-hyp-bin N (draws = n)
  std::int64_t successes = 30;     // tv-hyp-bin M
  ExperimentFamily cf_family = ExperimentFamily::CltBinomial;  // levy-cf cloud
  std::vector<double> u_grid;      // levy-cf
  bool naive_maxima = false;       // simulate all n draws for maxima
  unsigned threads = 0;            // 0: default_threads()

  /// Throws DomainError when a field violates the family's precondition.
  void validate() const;
};

struct ExperimentReport {
  std::string family;
  std::string metric_name;
  double metric_value = 0.0;
  std::int64_t n = 0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  /// Per-replicate scalar values (standardized maxima/sums), if any.
  std::vector<double> replicate_values;
  /// Covariance experiments: empirical and theoretical matrices.
  Eigen::MatrixXd empirical_cov;
  Eigen::MatrixXd theoretical_cov;
};

/// Default pass threshold of each family's metric.
double default_tolerance(ExperimentFamily family);

/// (M_n - b_n)/a_n per replicate, KS against the limit law. Maxima of
/// n >= 10^4 draws use M_n = F^{-1}(U^{1/n}) unless naive_maxima is set.
ExperimentReport run_max_experiment(const LimitExperiment& cfg);

/// Standardized binomial/Poisson/negative-binomial/iid-sum cloud, KS
/// against N(0,1).
ExperimentReport run_clt_experiment(const LimitExperiment& cfg);

/// reps x k matrix of (X_i - n p_i) / sqrt(n p_i).
Eigen::MatrixXd multinomial_replicates(const LimitExperiment& cfg);
ExperimentReport run_multinomial_experiment(const LimitExperiment& cfg);

struct HypToBin {
  std::int64_t population;
  std::int64_t successes;
  std::int64_t draws;
};
struct BinToPoisson {
  std::int64_t n;
  double lambda;
};
using DiscreteApprox = std::variant<HypToBin, BinToPoisson>;

/// Exact TV between Hypergeometric(N,M,n) and Binomial(n, M/N), or between
/// Binomial(n, lambda/n) and Poisson(lambda).
double discrete_approx_tv(const DiscreteApprox& family);

/// reps x k matrix of the process evaluated on cfg.grid.
Eigen::MatrixXd fidis_replicates(const LimitExperiment& cfg);
ExperimentReport run_fidis_experiment(const LimitExperiment& cfg);

/// sup over u_grid of |empirical cf of the standardized cloud - e^{-u^2/2}|.
/// cfg.cf_family selects the CLT cloud.
double levy_cf_check(const LimitExperiment& cfg, std::span<const double> u_grid);
ExperimentReport run_levy_experiment(const LimitExperiment& cfg);

/// Dispatches on cfg.family.
ExperimentReport run_experiment(const LimitExperiment& cfg);

}  // namespace vague

#include "vague/limits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "vague/errors.hpp"
#include "vague/metrics.hpp"
#include "vague/parallel.hpp"
#include "vague/rng.hpp"
#include "vague/sampling.hpp"

namespace vague {

void GaussianLimit::validate() const {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size()) {
    throw DomainError("GaussianLimit: shape mismatch");
  }
  if (cov.size() > 0 && (cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("GaussianLimit: covariance not symmetric");
  }
  if (cov.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
      throw DomainError("GaussianLimit: covariance not positive semidefinite");
    }
  }
}

bool cholesky_psd(const Eigen::MatrixXd& cov, double shift) {
  if (cov.rows() != cov.cols()) return false;
  const Eigen::MatrixXd shifted =
      cov + shift * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  return llt.info() == Eigen::Success;
}

namespace {

void check_grid(std::span<const double> t, bool closed_right, const char* what) {
  if (t.empty()) throw DomainError(std::string(what) + ": empty grid");
  for (std::size_t i = 0; i < t.size(); ++i) {
    const bool in_range = t[i] > 0.0 && (closed_right ? t[i] <= 1.0 : t[i] < 1.0);
    if (!in_range) throw DomainError(std::string(what) + ": grid point out of range");
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw DomainError(std::string(what) + ": grid must be strictly increasing");
    }
  }
}

}  // namespace

GaussianLimit multinomial_clt_covariance(std::span<const double> p) {
  if (p.empty()) throw DomainError("multinomial_clt_covariance: empty probability vector");
  double total = 0.0;
  for (double pi : p) {
    if (!(pi > 0.0)) throw DomainError("multinomial_clt_covariance: probabilities must be > 0");
    total += pi;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("multinomial_clt_covariance: probabilities must sum to 1");
  }
  const auto k = static_cast<Eigen::Index>(p.size());
  GaussianLimit g{Eigen::VectorXd::Zero(k), Eigen::MatrixXd(k, k)};
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      g.cov(i, j) = i == j ? 1.0 - p[i] : -std::sqrt(p[i] * p[j]);
    }
  }
  return g;
}

GaussianLimit empirical_process_fidis_cov(std::span<const double> t) {
  check_grid(t, false, "empirical_process_fidis_cov");
  const auto k = static_cast<Eigen::Index>(t.size());
  GaussianLimit g{Eigen::VectorXd::Zero(k), Eigen::MatrixXd(k, k)};
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) g.cov(i, j) = std::min(t[i], t[j]) - t[i] * t[j];
  }
  return g;
}

GaussianLimit partial_sum_fidis_cov(std::span<const double> t) {
  check_grid(t, true, "partial_sum_fidis_cov");
  const auto k = static_cast<Eigen::Index>(t.size());
  GaussianLimit g{Eigen::VectorXd::Zero(k), Eigen::MatrixXd(k, k)};
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) g.cov(i, j) = std::min(t[i], t[j]);
  }
  return g;
}

EvtNormalization evt_normalization(EvtFamily family, std::int64_t n, double alpha) {
  if (n < 1) throw DomainError("evt_normalization: n must be >= 1");
  const double dn = static_cast<double>(n);
  switch (family) {
    case EvtFamily::ExponentialGumbel:
      return {1.0, std::log(dn), Law::exponential1(), Law::gumbel()};
    case EvtFamily::ParetoFrechet:
      if (!(alpha > 0.0)) throw DomainError("evt_normalization: alpha must be > 0");
      return {std::pow(dn, 1.0 / alpha), 0.0, Law::pareto(alpha), Law::frechet(alpha)};
    case EvtFamily::UniformWeibull:
      return {1.0 / dn, 1.0, Law::uniform01(), Law::weibull_evt(1.0)};
  }
  throw DomainError("evt_normalization: unknown family");
}

// ---------------------------------------------------------------------------
// Family registry

namespace {

constexpr std::array<ExperimentFamily, 13> kFamilies = {
    ExperimentFamily::EvtGumbel,      ExperimentFamily::EvtFrechet,
    ExperimentFamily::EvtWeibull,     ExperimentFamily::CltBinomial,
    ExperimentFamily::CltPoisson,     ExperimentFamily::CltNegBinomial,
    ExperimentFamily::CltIid,         ExperimentFamily::Multinomial,
    ExperimentFamily::FidisEmpirical, ExperimentFamily::FidisPartialSum,
    ExperimentFamily::TvHypBin,       ExperimentFamily::TvBinPoisson,
    ExperimentFamily::LevyCf,
};

bool is_evt(ExperimentFamily f) {
  return f == ExperimentFamily::EvtGumbel || f == ExperimentFamily::EvtFrechet ||
         f == ExperimentFamily::EvtWeibull;
}

bool is_clt(ExperimentFamily f) {
  return f == ExperimentFamily::CltBinomial || f == ExperimentFamily::CltPoisson ||
         f == ExperimentFamily::CltNegBinomial || f == ExperimentFamily::CltIid;
}

EvtFamily evt_family(ExperimentFamily f) {
  switch (f) {
    case ExperimentFamily::EvtGumbel: return EvtFamily::ExponentialGumbel;
    case ExperimentFamily::EvtFrechet: return EvtFamily::ParetoFrechet;
    default: return EvtFamily::UniformWeibull;
  }
}

std::vector<double> default_levy_grid() {
  std::vector<double> g;
  for (int u = -5; u <= 5; ++u) {
    if (u != 0) g.push_back(u);
  }
  return g;
}

}  // namespace

std::string family_name(ExperimentFamily family) {
  switch (family) {
    case ExperimentFamily::EvtGumbel: return "evt-gumbel";
    case ExperimentFamily::EvtFrechet: return "evt-frechet";
    case ExperimentFamily::EvtWeibull: return "evt-weibull";
    case ExperimentFamily::CltBinomial: return "clt-binomial";
    case ExperimentFamily::CltPoisson: return "clt-poisson";
    case ExperimentFamily::CltNegBinomial: return "clt-negbinom";
    case ExperimentFamily::CltIid: return "clt-iid";
    case ExperimentFamily::Multinomial: return "multinomial";
    case ExperimentFamily::FidisEmpirical: return "fidis-empirical";
    case ExperimentFamily::FidisPartialSum: return "fidis-partialsum";
    case ExperimentFamily::TvHypBin: return "tv-hyp-bin";
    case ExperimentFamily::TvBinPoisson: return "tv-bin-poisson";
    case ExperimentFamily::LevyCf: return "levy-cf";
  }
  return "?";
}

std::optional<ExperimentFamily> family_from_name(std::string_view name) {
  for (auto f : kFamilies) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

std::span<const ExperimentFamily> all_families() { return kFamilies; }

double default_tolerance(ExperimentFamily family) {
  switch (family) {
    case ExperimentFamily::Multinomial:
    case ExperimentFamily::FidisPartialSum:
      return 0.05;
    case ExperimentFamily::TvHypBin:
    case ExperimentFamily::TvBinPoisson:
      return 0.01;
    case ExperimentFamily::LevyCf: return 0.03;
    default: return 0.02;
  }
}

void LimitExperiment::validate() const {
  if (n < 1) throw DomainError("experiment: n must be >= 1");
  if (reps < 1) throw DomainError("experiment: reps must be >= 1");
  switch (family) {
    case ExperimentFamily::EvtFrechet:
      if (!(alpha > 0.0)) throw DomainError("experiment: alpha must be > 0");
      break;
    case ExperimentFamily::CltBinomial:
    case ExperimentFamily::CltNegBinomial:
      if (!(p > 0.0 && p < 1.0)) throw DomainError("experiment: p must lie in (0,1)");
      break;
    case ExperimentFamily::CltPoisson:
      if (lambda < 0.0) throw DomainError("experiment: lambda must be > 0");
      break;
    case ExperimentFamily::CltIid:
      if (!std::isfinite(base_law.variance()) || !(base_law.variance() > 0.0)) {
        throw DomainError("experiment: base law needs a finite positive variance");
      }
      break;
    case ExperimentFamily::Multinomial:
      multinomial_clt_covariance(probs);
      break;
    case ExperimentFamily::FidisEmpirical:
      empirical_process_fidis_cov(grid);
      break;
    case ExperimentFamily::FidisPartialSum:
      partial_sum_fidis_cov(grid);
      if (std::abs(base_law.mean()) > 1e-12 || std::abs(base_law.variance() - 1.0) > 1e-12) {
        throw DomainError("experiment: partial-sum base law must have mean 0 and variance 1");
      }
      break;
    case ExperimentFamily::TvHypBin:
      if (population < 1 || successes <= 0 || successes >= population || n > population) {
        throw DomainError("experiment: need 0 < M < N and n <= N");
      }
      break;
    case ExperimentFamily::TvBinPoisson:
      if (lambda < 0.0 || (lambda > 0.0 ? lambda : 1.0) >= static_cast<double>(n)) {
        throw DomainError("experiment: need 0 < lambda < n");
      }
      break;
    case ExperimentFamily::LevyCf: {
      if (!is_clt(cf_family)) throw DomainError("experiment: levy-cf needs a CLT cloud family");
      LimitExperiment inner = *this;
      inner.family = cf_family;
      inner.validate();
      break;
    }
    default:
      break;
  }
}

// ---------------------------------------------------------------------------
// Maxima

ExperimentReport run_max_experiment(const LimitExperiment& cfg) {
  if (!is_evt(cfg.family)) throw DomainError("run_max_experiment: not an EVT family");
  cfg.validate();
  const auto norm = evt_normalization(evt_family(cfg.family), cfg.n, cfg.alpha);
  const auto reps = static_cast<std::size_t>(cfg.reps);
  const bool trick = cfg.n >= 10'000 && !cfg.naive_maxima;
  const double dn = static_cast<double>(cfg.n);
  std::vector<double> cloud(reps);
  for_each_replicate(
      reps,
      [&](std::size_t r) {
        RngStream rng = substream(cfg.seed, r);
        double m;
        if (trick) {
          // P(M_n <= x) = F(x)^n, so F^{-1}(U^{1/n}) has the law of M_n.
          const double v = std::exp(std::log(rng.uniform()) / dn);
          m = v < 1.0 ? quantile(norm.base, v) : quantile(norm.base, std::nextafter(1.0, 0.0));
        } else {
          m = -std::numeric_limits<double>::infinity();
          for (std::int64_t i = 0; i < cfg.n; ++i) m = std::max(m, quantile(norm.base, rng.uniform()));
        }
        cloud[r] = (m - norm.b_n) / norm.a_n;
      },
      cfg.threads);
  ExperimentReport rep;
  rep.family = family_name(cfg.family);
  rep.metric_name = "ks";
  rep.n = cfg.n;
  rep.reps = cfg.reps;
  rep.seed = cfg.seed;
  rep.replicate_values = cloud;
  std::sort(cloud.begin(), cloud.end());
  rep.metric_value = ks_distance(cloud, norm.limit);
  return rep;
}

// ---------------------------------------------------------------------------
// CLT clouds

namespace {

std::vector<double> clt_cloud(const LimitExperiment& cfg) {
  const auto reps = static_cast<std::size_t>(cfg.reps);
  const double dn = static_cast<double>(cfg.n);
  std::vector<double> cloud(reps);
  switch (cfg.family) {
    case ExperimentFamily::CltBinomial: {
      const Law law = Law::binomial(cfg.n, cfg.p);
      const double mean = dn * cfg.p;
      const double sd = std::sqrt(dn * cfg.p * (1.0 - cfg.p));
      for_each_replicate(
          reps,
          [&](std::size_t r) {
            RngStream rng = substream(cfg.seed, r);
            const double x = generalized_inverse(law.lattice_cdf(), rng.uniform());
            cloud[r] = (x - mean) / sd;
          },
          cfg.threads);
      break;
    }
    case ExperimentFamily::CltPoisson: {
      const double lam = cfg.lambda > 0.0 ? cfg.lambda : dn;
      const Law law = Law::poisson(lam);
      const double sd = std::sqrt(lam);
      for_each_replicate(
          reps,
          [&](std::size_t r) {
            RngStream rng = substream(cfg.seed, r);
            const double x = generalized_inverse(law.lattice_cdf(), rng.uniform());
            cloud[r] = (x - lam) / sd;
          },
          cfg.threads);
      break;
    }
    case ExperimentFamily::CltNegBinomial: {
      // X_k = Y_1 + ... + Y_k with Y_i geometric trial counts; k = n.
      const double p = cfg.p;
      const double q = 1.0 - p;
      const double log_q = std::log1p(-p);
      const double k = dn;
      const double sd = std::sqrt(k * q);
      for_each_replicate(
          reps,
          [&](std::size_t r) {
            RngStream rng = substream(cfg.seed, r);
            double x = 0.0;
            for (std::int64_t i = 0; i < cfg.n; ++i) {
              x += std::max(1.0, std::ceil(std::log(rng.uniform()) / log_q));
            }
            cloud[r] = p * (x - k / p) / sd;
          },
          cfg.threads);
      break;
    }
    case ExperimentFamily::CltIid: {
      const Law& base = cfg.base_law;
      const double mean = base.mean();
      const double sd = std::sqrt(base.variance());
      const double root_n = std::sqrt(dn);
      for_each_replicate(
          reps,
          [&](std::size_t r) {
            RngStream rng = substream(cfg.seed, r);
            double s = 0.0;
            for (std::int64_t i = 0; i < cfg.n; ++i) s += quantile(base, rng.uniform()) - mean;
            cloud[r] = s / (sd * root_n);
          },
          cfg.threads);
      break;
    }
    default:
      throw DomainError("clt cloud: not a CLT family");
  }
  return cloud;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

ExperimentReport run_clt_experiment(const LimitExperiment& cfg) {
  if (!is_clt(cfg.family)) throw DomainError("run_clt_experiment: not a CLT family");
  cfg.validate();
  ExperimentReport rep;
  rep.family = family_name(cfg.family);
  rep.metric_name = "ks";
  rep.n = cfg.n;
  rep.reps = cfg.reps;
  rep.seed = cfg.seed;
  rep.replicate_values = clt_cloud(cfg);
  std::vector<double> sorted = rep.replicate_values;
  std::sort(sorted.begin(), sorted.end());
  rep.metric_value = ks_distance(sorted, Law::gaussian(0.0, 1.0));
  return rep;
}

// ---------------------------------------------------------------------------
// Multinomial

Eigen::MatrixXd multinomial_replicates(const LimitExperiment& cfg) {
  multinomial_clt_covariance(cfg.probs);
  const auto k = static_cast<Eigen::Index>(cfg.probs.size());
  std::vector<double> cells(cfg.probs.size());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<double>(i);
  const StepCdf categorical = StepCdf::from_masses(cells, cfg.probs);
  const double dn = static_cast<double>(cfg.n);
  Eigen::MatrixXd z(cfg.reps, k);
  for_each_replicate(
      static_cast<std::size_t>(cfg.reps),
      [&](std::size_t r) {
        RngStream rng = substream(cfg.seed, r);
        std::vector<double> counts(cells.size(), 0.0);
        for (std::int64_t i = 0; i < cfg.n; ++i) {
          counts[static_cast<std::size_t>(generalized_inverse(categorical, rng.uniform()))] += 1.0;
        }
        for (Eigen::Index j = 0; j < k; ++j) {
          const double expected = dn * cfg.probs[j];
          z(static_cast<Eigen::Index>(r), j) = (counts[j] - expected) / std::sqrt(expected);
        }
      },
      cfg.threads);
  return z;
}

ExperimentReport run_multinomial_experiment(const LimitExperiment& cfg) {
  if (cfg.family != ExperimentFamily::Multinomial) {
    throw DomainError("run_multinomial_experiment: wrong family");
  }
  cfg.validate();
  ExperimentReport rep;
  rep.family = family_name(cfg.family);
  rep.metric_name = "max_abs_cov_err";
  rep.n = cfg.n;
  rep.reps = cfg.reps;
  rep.seed = cfg.seed;
  rep.empirical_cov = empirical_cov(multinomial_replicates(cfg));
  rep.theoretical_cov = multinomial_clt_covariance(cfg.probs).cov;
  rep.metric_value = max_abs_diff(rep.empirical_cov, rep.theoretical_cov);
  return rep;
}

// ---------------------------------------------------------------------------
// Discrete approximations

double discrete_approx_tv(const DiscreteApprox& family) {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, HypToBin>) {
          if (f.successes <= 0 || f.successes >= f.population) {
            throw DomainError("discrete_approx_tv: need 0 < M < N");
          }
          const double p = static_cast<double>(f.successes) / static_cast<double>(f.population);
          return tv_distance(
              discrete_table(Law::hypergeometric(f.population, f.successes, f.draws)),
              discrete_table(Law::binomial(f.draws, p)));
        } else {
          if (!(f.lambda > 0.0) || f.lambda >= static_cast<double>(f.n)) {
            throw DomainError("discrete_approx_tv: need 0 < lambda < n");
          }
          return tv_distance(
              discrete_table(Law::binomial(f.n, f.lambda / static_cast<double>(f.n))),
              discrete_table(Law::poisson(f.lambda)));
        }
      },
      family);
}

// ---------------------------------------------------------------------------
// Finite-dimensional distributions

Eigen::MatrixXd fidis_replicates(const LimitExperiment& cfg) {
  const auto& t = cfg.grid;
  const auto k = static_cast<Eigen::Index>(t.size());
  const double dn = static_cast<double>(cfg.n);
  const double root_n = std::sqrt(dn);
  Eigen::MatrixXd out(cfg.reps, k);
  if (cfg.family == ExperimentFamily::FidisEmpirical) {
    empirical_process_fidis_cov(t);
    for_each_replicate(
        static_cast<std::size_t>(cfg.reps),
        [&](std::size_t r) {
          RngStream rng = substream(cfg.seed, r);
          // bucket[j]: draws in (t_{j-1}, t_j]; bucket[k]: draws above t_k.
          std::vector<std::int64_t> bucket(t.size() + 1, 0);
          for (std::int64_t i = 0; i < cfg.n; ++i) {
            const double u = rng.uniform();
            std::size_t j = 0;
            while (j < t.size() && u > t[j]) ++j;
            ++bucket[j];
          }
          std::int64_t below = 0;
          for (Eigen::Index j = 0; j < k; ++j) {
            below += bucket[static_cast<std::size_t>(j)];
            out(static_cast<Eigen::Index>(r), j) =
                root_n * (static_cast<double>(below) / dn - t[static_cast<std::size_t>(j)]);
          }
        },
        cfg.threads);
  } else if (cfg.family == ExperimentFamily::FidisPartialSum) {
    partial_sum_fidis_cov(t);
    // S_{floor(n t_j)} with S_0 = 0.
    std::vector<std::int64_t> index(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
      index[j] = static_cast<std::int64_t>(std::floor(dn * t[j]));
    }
    const Law& base = cfg.base_law;
    for_each_replicate(
        static_cast<std::size_t>(cfg.reps),
        [&](std::size_t r) {
          RngStream rng = substream(cfg.seed, r);
          double s = 0.0;
          std::int64_t i = 0;
          for (std::size_t j = 0; j < index.size(); ++j) {
            for (; i < index[j]; ++i) s += quantile(base, rng.uniform());
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = s / root_n;
          }
        },
        cfg.threads);
  } else {
    throw DomainError("fidis_replicates: not a fidis family");
  }
  return out;
}

ExperimentReport run_fidis_experiment(const LimitExperiment& cfg) {
  cfg.validate();
  ExperimentReport rep;
  rep.family = family_name(cfg.family);
  rep.metric_name = "max_abs_cov_err";
  rep.n = cfg.n;
  rep.reps = cfg.reps;
  rep.seed = cfg.seed;
  rep.theoretical_cov = cfg.family == ExperimentFamily::FidisEmpirical
                            ? empirical_process_fidis_cov(cfg.grid).cov
                            : partial_sum_fidis_cov(cfg.grid).cov;
  rep.empirical_cov = empirical_cov(fidis_replicates(cfg));
  rep.metric_value = max_abs_diff(rep.empirical_cov, rep.theoretical_cov);
  return rep;
}

// ---------------------------------------------------------------------------
// Characteristic functions

double levy_cf_check(const LimitExperiment& cfg, std::span<const double> u_grid) {
  LimitExperiment inner = cfg;
  if (cfg.family == ExperimentFamily::LevyCf) inner.family = cfg.cf_family;
  if (!is_clt(inner.family)) throw DomainError("levy_cf_check: needs a CLT family");
  inner.validate();
  const auto cloud = clt_cloud(inner);
  double gap = 0.0;
  for (double u : u_grid) {
    gap = std::max(gap, std::abs(empirical_cf(cloud, u) - std::exp(-0.5 * u * u)));
  }
  return gap;
}

ExperimentReport run_levy_experiment(const LimitExperiment& cfg) {
  cfg.validate();
  ExperimentReport rep;
  rep.family = family_name(cfg.family);
  rep.metric_name = "sup_cf_gap";
  rep.n = cfg.n;
  rep.reps = cfg.reps;
  rep.seed = cfg.seed;
  const auto grid = cfg.u_grid.empty() ? default_levy_grid() : cfg.u_grid;
  rep.metric_value = levy_cf_check(cfg, grid);
  return rep;
}

ExperimentReport run_experiment(const LimitExperiment& cfg) {
  if (is_evt(cfg.family)) return run_max_experiment(cfg);
  if (is_clt(cfg.family)) return run_clt_experiment(cfg);
  switch (cfg.family) {
    case ExperimentFamily::Multinomial: return run_multinomial_experiment(cfg);
    case ExperimentFamily::FidisEmpirical:
    case ExperimentFamily::FidisPartialSum:
      return run_fidis_experiment(cfg);
    case ExperimentFamily::TvHypBin:
    case ExperimentFamily::TvBinPoisson: {
      cfg.validate();
      ExperimentReport rep;
      rep.family = family_name(cfg.family);
      rep.metric_name = "tv";
      rep.n = cfg.n;
      rep.reps = cfg.reps;
      rep.seed = cfg.seed;
      rep.metric_value =
          cfg.family == ExperimentFamily::TvHypBin
              ? discrete_approx_tv(HypToBin{cfg.population, cfg.successes, cfg.n})
              : discrete_approx_tv(BinToPoisson{cfg.n, cfg.lambda > 0.0 ? cfg.lambda : 1.0});
      return rep;
    }
    case ExperimentFamily::LevyCf: return run_levy_experiment(cfg);
    default: break;
  }
  throw DomainError("run_experiment: unknown family");
}

}  // namespace vague

#include "vague/fep.hpp"

#include <algorithm>
#include <cmath>

#include "vague/errors.hpp"
#include "vague/parallel.hpp"
#include "vague/rng.hpp"

namespace vague {

namespace {

double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

double poly_expectation(const std::vector<double>& c, const Law& law) {
  double acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] != 0.0) acc += c[k] * raw_moment(law, static_cast<int>(k));
  }
  return acc;
}

}  // namespace

Statistic::Statistic(std::string label, std::function<double(const Observation&)> fn)
    : label_(std::move(label)), fn_(std::move(fn)) {}

Statistic Statistic::polynomial(std::vector<double> coeffs, std::string label) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  if (label.empty()) {
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k] == 0.0) continue;
      if (!label.empty()) label += "+";
      label += std::to_string(coeffs[k]);
      if (k > 0) label += "*x^" + std::to_string(k);
    }
    if (label.empty()) label = "0";
  }
  Statistic s(std::move(label), [coeffs](const Observation& z) { return eval_poly(coeffs, z.x); });
  s.coeffs_ = std::move(coeffs);
  return s;
}

Statistic Statistic::constant(double c) { return polynomial({c}, std::to_string(c)); }

Statistic Statistic::power(int k) {
  if (k < 0) throw DomainError("Statistic::power: negative degree");
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = 1.0;
  return polynomial(std::move(c), k == 1 ? "x" : "x" + std::to_string(k));
}

Statistic Statistic::second_coordinate() {
  return Statistic("y", [](const Observation& z) { return z.y; });
}

Statistic Statistic::linear(double a, const Statistic& f, double b, const Statistic& g) {
  std::string label = "(" + std::to_string(a) + "*" + f.label() + "+" + std::to_string(b) + "*" +
                      g.label() + ")";
  if (f.coeffs_ && g.coeffs_) {
    std::vector<double> c(std::max(f.coeffs_->size(), g.coeffs_->size()), 0.0);
    for (std::size_t k = 0; k < f.coeffs_->size(); ++k) c[k] += a * (*f.coeffs_)[k];
    for (std::size_t k = 0; k < g.coeffs_->size(); ++k) c[k] += b * (*g.coeffs_)[k];
    return polynomial(std::move(c), std::move(label));
  }
  auto ff = f.fn_;
  auto gf = g.fn_;
  return Statistic(std::move(label),
                   [a, b, ff, gf](const Observation& z) { return a * ff(z) + b * gf(z); });
}

Statistic parse_statistic(const std::string& name) {
  if (name == "x") return Statistic::power(1);
  if (name == "y") return Statistic::second_coordinate();
  if (name.size() > 1 && name[0] == 'x' &&
      std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return Statistic::power(std::stoi(name.substr(1)));
  }
  throw DomainError("unknown statistic '" + name + "' (expected x, y, x2, x3, ...)");
}

double raw_moment(const Law& law, int k) {
  if (k < 0) throw DomainError("raw_moment: negative order");
  if (k == 0) return 1.0;
  switch (law.kind()) {
    case LawKind::Gaussian: {
      double prev = 1.0, cur = law.mu();
      for (int j = 2; j <= k; ++j) {
        const double next = law.mu() * cur + (j - 1) * law.sigma2() * prev;
        prev = cur;
        cur = next;
      }
      return cur;
    }
    case LawKind::Exponential1: return std::tgamma(k + 1.0);
    case LawKind::Uniform01: return 1.0 / (k + 1.0);
    case LawKind::Beta: {
      double m = 1.0;
      for (int r = 0; r < k; ++r) m *= (law.beta_a() + r) / (law.beta_a() + law.beta_b() + r);
      return m;
    }
    case LawKind::Pareto:
      if (law.alpha() > k) return law.alpha() / (law.alpha() - k);
      throw MomentUnavailable("raw_moment: pareto moment of order " + std::to_string(k) +
                              " is infinite");
    default:
      throw MomentUnavailable("raw_moment: no closed-form moments for " + law.spec());
  }
}

double expectation(const Statistic& f, const Law& law) {
  if (!f.coefficients()) throw MomentUnavailable("expectation: '" + f.label() + "' is not polynomial");
  return poly_expectation(*f.coefficients(), law);
}

double fep_evaluate(std::span<const Observation> sample, const Statistic& f, double mean_f) {
  if (sample.empty()) throw DomainError("fep_evaluate: empty sample");
  double s = 0.0;
  for (const auto& z : sample) s += f(z) - mean_f;
  return s / std::sqrt(static_cast<double>(sample.size()));
}

double gamma_cov(const Statistic& f, const Statistic& g, const Law& law) {
  if (!f.coefficients() || !g.coefficients()) {
    throw MomentUnavailable("gamma_cov: exact value needs polynomial statistics");
  }
  const auto& cf = *f.coefficients();
  const auto& cg = *g.coefficients();
  return poly_expectation(poly_mul(cf, cg), law) -
         poly_expectation(cf, law) * poly_expectation(cg, law);
}

double gamma_cov(const Statistic& f, const Statistic& g, std::span<const Observation> sample) {
  if (sample.size() < 2) throw DomainError("gamma_cov: need at least 2 observations");
  const double n = static_cast<double>(sample.size());
  double mf = 0.0, mg = 0.0;
  for (const auto& z : sample) {
    mf += f(z);
    mg += g(z);
  }
  mf /= n;
  mg /= n;
  double acc = 0.0;
  for (const auto& z : sample) acc += (f(z) - mf) * (g(z) - mg);
  return acc / (n - 1.0);
}

GammaEstimate gamma_cov(const Statistic& f, const Statistic& g, const Law& law,
                        std::span<const Observation> sample) {
  try {
    return {gamma_cov(f, g, law), true, 0.0};
  } catch (const MomentUnavailable&) {
    if (sample.size() < 2) throw;
  }
  return {gamma_cov(f, g, sample), false, 3.0 / std::sqrt(static_cast<double>(sample.size()))};
}

GaussianLimit fidi_limit(std::span<const Statistic> fs, const Law& law) {
  const auto k = static_cast<Eigen::Index>(fs.size());
  if (k == 0) throw DomainError("fidi_limit: no statistics");
  GaussianLimit g{Eigen::VectorXd::Zero(k), Eigen::MatrixXd(k, k)};
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      g.cov(i, j) = g.cov(j, i) =
          gamma_cov(fs[static_cast<std::size_t>(i)], fs[static_cast<std::size_t>(j)], law);
    }
  }
  return g;
}

Expansion expansion_sum(const Expansion& a, const Expansion& b) {
  return {a.constant + b.constant, Statistic::linear(1.0, a.influence, 1.0, b.influence)};
}

Expansion expansion_product(const Expansion& a, const Expansion& b) {
  return {a.constant * b.constant,
          Statistic::linear(b.constant, a.influence, a.constant, b.influence)};
}

Expansion expansion_quotient(const Expansion& a, const Expansion& b) {
  if (b.constant == 0.0) throw DivisionByZeroConstant("expansion_quotient: B = 0");
  const double B = b.constant;
  return {a.constant / B, Statistic::linear(1.0 / B, a.influence, -a.constant / (B * B), b.influence)};
}

double plugin_correlation(std::span<const Observation> pairs) {
  if (pairs.size() < 2) throw DomainError("plugin_correlation: need at least 2 pairs");
  const double n = static_cast<double>(pairs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& z : pairs) {
    mx += z.x;
    my += z.y;
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& z : pairs) {
    const double dx = z.x - mx;
    const double dy = z.y - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateSample("plugin_correlation: a coordinate has zero sample variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

void BivariateMoments::validate() const {
  if (!(sigma2_x > 0.0 && sigma2_y > 0.0)) {
    throw DomainError("BivariateMoments: variances must be positive");
  }
  if (std::abs(sigma_xy) > std::sqrt(sigma2_x * sigma2_y) * (1.0 + 1e-12)) {
    throw DomainError("BivariateMoments: |sigma_xy| exceeds the Cauchy-Schwarz bound");
  }
  if (mu_4x < sigma2_x * sigma2_x * (1.0 - 1e-12) || mu_4y < sigma2_y * sigma2_y * (1.0 - 1e-12)) {
    throw DomainError("BivariateMoments: fourth moment below squared variance");
  }
}

double BivariateMoments::rho() const { return sigma_xy / std::sqrt(sigma2_x * sigma2_y); }

BivariateMoments BivariateMoments::gaussian(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) throw DomainError("BivariateMoments::gaussian: |rho| must be < 1");
  BivariateMoments m;
  m.sigma_xy = rho;
  m.mu_22 = 1.0 + 2.0 * rho * rho;
  m.mu_4x = 3.0;
  m.mu_4y = 3.0;
  m.mu_31 = 3.0 * rho;
  m.mu_13 = 3.0 * rho;
  return m;
}

double correlation_asymptotic_variance(const BivariateMoments& m) {
  m.validate();
  const double sx = std::sqrt(m.sigma2_x);
  const double sy = std::sqrt(m.sigma2_y);
  const double rho = m.rho();
  const double r2 = rho * rho;
  return (1.0 + r2 / 2.0) * m.mu_22 / (m.sigma2_x * m.sigma2_y) +
         r2 * (m.mu_4x / (m.sigma2_x * m.sigma2_x) + m.mu_4y / (m.sigma2_y * m.sigma2_y)) / 4.0 -
         rho * (m.mu_31 / (sx * sx * sx * sy) + m.mu_13 / (sx * sy * sy * sy));
}

std::vector<Observation> draw_pairs(const CorrelationLaw& law, RngStream& rng, std::size_t n) {
  std::vector<Observation> out(n);
  if (const auto* g = std::get_if<BivariateGaussian>(&law)) {
    // Cholesky factor of [[1, rho], [rho, 1]].
    const double c = std::sqrt(1.0 - g->rho * g->rho);
    for (auto& z : out) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      z = {z1, g->rho * z1 + c * z2};
    }
  } else {
    const auto& pair = std::get<IndependentPair>(law);
    for (auto& z : out) {
      const double x = quantile(pair.x, rng.uniform());
      z = {x, quantile(pair.y, rng.uniform())};
    }
  }
  return out;
}

CorrelationReport correlation_experiment(const CorrelationLaw& law, std::int64_t n,
                                         std::int64_t reps, std::uint64_t seed, unsigned threads) {
  if (n < 2 || reps < 2) throw DomainError("correlation_experiment: need n >= 2 and reps >= 2");
  double rho = 0.0;
  double sigma2 = 1.0;
  if (const auto* g = std::get_if<BivariateGaussian>(&law)) {
    rho = g->rho;
    sigma2 = correlation_asymptotic_variance(BivariateMoments::gaussian(rho));
  } else {
    const auto& pair = std::get<IndependentPair>(law);
    if (!std::isfinite(pair.x.variance()) || !std::isfinite(pair.y.variance())) {
      throw DomainError("correlation_experiment: coordinates need finite variance");
    }
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  CorrelationReport report{};
  report.predicted_sigma2 = sigma2;
  report.root_n_deviation.resize(static_cast<std::size_t>(reps));
  for_each_replicate(
      static_cast<std::size_t>(reps),
      [&](std::size_t r) {
        RngStream rng = substream(seed, r);
        const auto pairs = draw_pairs(law, rng, static_cast<std::size_t>(n));
        report.root_n_deviation[r] = root_n * (plugin_correlation(pairs) - rho);
      },
      threads);
  const auto& d = report.root_n_deviation;
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(d.size());
  double var = 0.0;
  std::size_t rejected = 0;
  const double cut = 1.96 * std::sqrt(sigma2);
  for (double v : d) {
    var += (v - mean) * (v - mean);
    if (std::abs(v) > cut) ++rejected;
  }
  report.empirical_var_of_root_n_rho = var / static_cast<double>(d.size() - 1);
  report.rejection_rate = static_cast<double>(rejected) / static_cast<double>(d.size());
  return report;
}

}  // namespace vague

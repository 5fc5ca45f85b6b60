#include "vague/law.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace vague {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Table entries below this fraction of the modal mass are cut.
constexpr double kRelativeCut = 1e-20;
constexpr std::size_t kMaxTableSize = 20'000'000;

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Log pmf via log-gamma; used off the tabulated range.
double log_pmf(const Law& law, double k) {
  switch (law.kind()) {
    case LawKind::Poisson:
      return -law.lambda() + k * std::log(law.lambda()) - std::lgamma(k + 1.0);
    case LawKind::Binomial: {
      const double n = static_cast<double>(law.trials());
      return log_choose(n, k) + k * std::log(law.prob()) + (n - k) * std::log1p(-law.prob());
    }
    case LawKind::Hypergeometric: {
      const double N = static_cast<double>(law.population());
      const double M = static_cast<double>(law.successes());
      const double n = static_cast<double>(law.draws());
      return log_choose(M, k) + log_choose(N - M, n - k) - log_choose(N, n);
    }
    case LawKind::NegBinomial: {
      const double r = static_cast<double>(law.trials());
      return log_choose(k - 1.0, r - 1.0) + r * std::log(law.prob()) +
             (k - r) * std::log1p(-law.prob());
    }
    default:
      return -kInf;
  }
}

double checked_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(what) + ": p must lie in (0,1)");
  }
  return p;
}

double checked_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + ": parameter must be positive and finite");
  }
  return v;
}

}  // namespace

Law::Law(LawKind kind, double p0, double p1, double p2) : kind_(kind), p0_(p0), p1_(p1), p2_(p2) {
  if (is_discrete()) tabulate();
}

Law Law::uniform01() { return Law(LawKind::Uniform01, 0.0); }
Law Law::exponential1() { return Law(LawKind::Exponential1, 0.0); }
Law Law::pareto(double alpha) { return Law(LawKind::Pareto, checked_positive(alpha, "pareto")); }
Law Law::gumbel() { return Law(LawKind::Gumbel, 0.0); }
Law Law::frechet(double alpha) {
  return Law(LawKind::Frechet, checked_positive(alpha, "frechet"));
}
Law Law::weibull_evt(double beta) {
  return Law(LawKind::WeibullEVT, checked_positive(beta, "weibull"));
}
Law Law::poisson(double lambda) {
  return Law(LawKind::Poisson, checked_positive(lambda, "poisson"));
}
Law Law::binomial(std::int64_t n, double p) {
  if (n < 1) throw DomainError("binomial: n must be >= 1");
  return Law(LawKind::Binomial, static_cast<double>(n), checked_probability(p, "binomial"));
}
Law Law::hypergeometric(std::int64_t N, std::int64_t M, std::int64_t n) {
  if (N < 1) throw DomainError("hypergeometric: N must be >= 1");
  if (M < 0 || M > N) throw DomainError("hypergeometric: M must lie in [0,N]");
  if (n < 1 || n > N) throw DomainError("hypergeometric: n must lie in [1,N]");
  return Law(LawKind::Hypergeometric, static_cast<double>(N), static_cast<double>(M),
             static_cast<double>(n));
}
Law Law::negbinomial(std::int64_t k, double p) {
  if (k < 1) throw DomainError("negbinomial: k must be >= 1");
  return Law(LawKind::NegBinomial, static_cast<double>(k), checked_probability(p, "negbinomial"));
}
Law Law::gaussian(double mu, double sigma2) {
  if (!std::isfinite(mu)) throw DomainError("gaussian: mu must be finite");
  return Law(LawKind::Gaussian, mu, checked_positive(sigma2, "gaussian"));
}
Law Law::beta(double a, double b) {
  return Law(LawKind::Beta, checked_positive(a, "beta"), checked_positive(b, "beta"));
}

bool Law::is_discrete() const {
  switch (kind_) {
    case LawKind::Poisson:
    case LawKind::Binomial:
    case LawKind::Hypergeometric:
    case LawKind::NegBinomial:
      return true;
    default:
      return false;
  }
}

void Law::tabulate() {
  // Integer support bounds, modal point and the ratio p(k+1)/p(k).
  double lo = 0.0;
  double hi = kInf;
  double mode = 0.0;
  std::function<double(double)> ratio;
  switch (kind_) {
    case LawKind::Poisson: {
      const double lam = p0_;
      mode = std::floor(lam);
      ratio = [lam](double k) { return lam / (k + 1.0); };
      break;
    }
    case LawKind::Binomial: {
      const double n = p0_;
      const double odds = p1_ / (1.0 - p1_);
      hi = n;
      mode = std::min(n, std::floor((n + 1.0) * p1_));
      ratio = [n, odds](double k) { return (n - k) / (k + 1.0) * odds; };
      break;
    }
    case LawKind::Hypergeometric: {
      const double N = p0_, M = p1_, n = p2_;
      lo = std::max(0.0, n - (N - M));
      hi = std::min(n, M);
      mode = std::clamp(std::floor((n + 1.0) * (M + 1.0) / (N + 2.0)), lo, hi);
      ratio = [N, M, n](double k) {
        return (M - k) * (n - k) / ((k + 1.0) * (N - M - n + k + 1.0));
      };
      break;
    }
    case LawKind::NegBinomial: {
      const double r = p0_;
      const double q = 1.0 - p1_;
      lo = r;
      mode = std::max(r, std::floor((r - 1.0) / p1_));
      ratio = [r, q](double x) { return x / (x - r + 1.0) * q; };
      break;
    }
    default:
      return;
  }

  std::vector<double> up{1.0};
  double last_up_ratio = 0.0;
  for (double k = mode; k < hi;) {
    last_up_ratio = ratio(k);
    const double w = up.back() * last_up_ratio;
    k += 1.0;
    if (w < kRelativeCut) break;
    up.push_back(w);
    if (up.size() > kMaxTableSize) throw DomainError("law support too wide to tabulate");
  }
  std::vector<double> down;
  double last_down_ratio = 0.0;
  {
    double w = 1.0;
    for (double k = mode; k > lo;) {
      const double r = ratio(k - 1.0);
      last_down_ratio = 1.0 / r;
      w = w / r;
      k -= 1.0;
      if (w < kRelativeCut) break;
      down.push_back(w);
      if (down.size() > kMaxTableSize) throw DomainError("law support too wide to tabulate");
    }
  }

  auto table = std::make_shared<Table>(Table{{}, {}, 0.0, StepCdf::point_mass(0.0)});
  const std::size_t size = down.size() + up.size();
  table->support.reserve(size);
  table->masses.reserve(size);
  const double first = mode - static_cast<double>(down.size());
  for (std::size_t i = 0; i < size; ++i) {
    table->support.push_back(first + static_cast<double>(i));
    table->masses.push_back(i < down.size() ? down[down.size() - 1 - i] : up[i - down.size()]);
  }
  // Sum smallest first.
  double total = 0.0;
  {
    std::vector<double> sorted = table->masses;
    std::sort(sorted.begin(), sorted.end());
    for (double w : sorted) total += w;
  }
  for (double& m : table->masses) m /= total;

  // Geometric bound on each cut tail from the last ratio seen.
  auto tail = [total](bool cut, double w_last, double r) {
    if (!cut) return 0.0;
    if (r >= 1.0) return kInf;
    return w_last * r / (1.0 - r) / total;
  };
  const bool cut_hi = table->support.back() < hi;
  const bool cut_lo = table->support.front() > lo;
  table->remainder = tail(cut_hi, up.back(), last_up_ratio) +
                     tail(cut_lo, down.empty() ? 1.0 : down.back(), last_down_ratio);
  table->cdf = StepCdf::from_masses(table->support, table->masses);
  table_ = std::move(table);
}

const std::vector<double>& Law::table_support() const {
  if (!table_) throw DomainError("table_support: law is not discrete");
  return table_->support;
}
const std::vector<double>& Law::table_masses() const {
  if (!table_) throw DomainError("table_masses: law is not discrete");
  return table_->masses;
}
double Law::truncation_remainder() const { return table_ ? table_->remainder : 0.0; }
const StepCdf& Law::lattice_cdf() const {
  if (!table_) throw DomainError("lattice_cdf: law is not discrete");
  return table_->cdf;
}

double Law::mean() const {
  switch (kind_) {
    case LawKind::Uniform01: return 0.5;
    case LawKind::Exponential1: return 1.0;
    case LawKind::Pareto: return p0_ > 1.0 ? p0_ / (p0_ - 1.0) : kInf;
    case LawKind::Gumbel: return std::numbers::egamma;
    case LawKind::Frechet: return p0_ > 1.0 ? std::tgamma(1.0 - 1.0 / p0_) : kInf;
    case LawKind::WeibullEVT: return -std::tgamma(1.0 + 1.0 / p0_);
    case LawKind::Poisson: return p0_;
    case LawKind::Binomial: return p0_ * p1_;
    case LawKind::Hypergeometric: return p2_ * p1_ / p0_;
    case LawKind::NegBinomial: return p0_ / p1_;
    case LawKind::Gaussian: return p0_;
    case LawKind::Beta: return p0_ / (p0_ + p1_);
  }
  return kInf;
}

double Law::variance() const {
  switch (kind_) {
    case LawKind::Uniform01: return 1.0 / 12.0;
    case LawKind::Exponential1: return 1.0;
    case LawKind::Pareto:
      return p0_ > 2.0 ? p0_ / ((p0_ - 1.0) * (p0_ - 1.0) * (p0_ - 2.0)) : kInf;
    case LawKind::Gumbel: return std::numbers::pi * std::numbers::pi / 6.0;
    case LawKind::Frechet: {
      if (p0_ <= 2.0) return kInf;
      const double g1 = std::tgamma(1.0 - 1.0 / p0_);
      return std::tgamma(1.0 - 2.0 / p0_) - g1 * g1;
    }
    case LawKind::WeibullEVT: {
      const double g1 = std::tgamma(1.0 + 1.0 / p0_);
      return std::tgamma(1.0 + 2.0 / p0_) - g1 * g1;
    }
    case LawKind::Poisson: return p0_;
    case LawKind::Binomial: return p0_ * p1_ * (1.0 - p1_);
    case LawKind::Hypergeometric: {
      const double N = p0_, M = p1_, n = p2_;
      if (N <= 1.0) return 0.0;
      return n * (M / N) * (1.0 - M / N) * (N - n) / (N - 1.0);
    }
    case LawKind::NegBinomial: return p0_ * (1.0 - p1_) / (p1_ * p1_);
    case LawKind::Gaussian: return p1_;
    case LawKind::Beta: {
      const double s = p0_ + p1_;
      return p0_ * p1_ / (s * s * (s + 1.0));
    }
  }
  return kInf;
}

double Law::support_lower() const {
  switch (kind_) {
    case LawKind::Uniform01:
    case LawKind::Exponential1:
    case LawKind::Frechet:
    case LawKind::Beta:
      return 0.0;
    case LawKind::Pareto: return 1.0;
    case LawKind::Gumbel:
    case LawKind::WeibullEVT:
    case LawKind::Gaussian:
      return -kInf;
    default:
      return table_->support.front();
  }
}

double Law::support_upper() const {
  switch (kind_) {
    case LawKind::Uniform01:
    case LawKind::Beta:
      return 1.0;
    case LawKind::WeibullEVT: return 0.0;
    case LawKind::Exponential1:
    case LawKind::Pareto:
    case LawKind::Gumbel:
    case LawKind::Frechet:
    case LawKind::Gaussian:
      return kInf;
    default:
      return table_->cdf.jump_points().back();
  }
}

std::string Law::spec() const {
  auto i = [](double v) { return std::to_string(static_cast<std::int64_t>(v)); };
  switch (kind_) {
    case LawKind::Uniform01: return "unif";
    case LawKind::Exponential1: return "exp";
    case LawKind::Pareto: return "pareto:alpha=" + fmt_double(p0_);
    case LawKind::Gumbel: return "gumbel";
    case LawKind::Frechet: return "frechet:alpha=" + fmt_double(p0_);
    case LawKind::WeibullEVT: return "weibull:beta=" + fmt_double(p0_);
    case LawKind::Poisson: return "poisson:lambda=" + fmt_double(p0_);
    case LawKind::Binomial: return "binom:n=" + i(p0_) + ",p=" + fmt_double(p1_);
    case LawKind::Hypergeometric:
      return "hypergeom:N=" + i(p0_) + ",M=" + i(p1_) + ",n=" + i(p2_);
    case LawKind::NegBinomial: return "negbinom:k=" + i(p0_) + ",p=" + fmt_double(p1_);
    case LawKind::Gaussian: return "gauss:mu=" + fmt_double(p0_) + ",sigma2=" + fmt_double(p1_);
    case LawKind::Beta: return "beta:a=" + fmt_double(p0_) + ",b=" + fmt_double(p1_);
  }
  return "?";
}

double cdf(const Law& law, double x) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  switch (law.kind()) {
    case LawKind::Uniform01: return std::clamp(x, 0.0, 1.0);
    case LawKind::Exponential1: return x <= 0.0 ? 0.0 : -std::expm1(-x);
    case LawKind::Pareto: return x <= 1.0 ? 0.0 : -std::expm1(-law.alpha() * std::log(x));
    case LawKind::Gumbel: return std::exp(-std::exp(-x));
    case LawKind::Frechet: return x <= 0.0 ? 0.0 : std::exp(-std::pow(x, -law.alpha()));
    case LawKind::WeibullEVT: return x >= 0.0 ? 1.0 : std::exp(-std::pow(-x, law.shape_beta()));
    case LawKind::Gaussian:
      return 0.5 * std::erfc(-(x - law.mu()) / std::sqrt(2.0 * law.sigma2()));
    case LawKind::Beta:
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return boost::math::ibeta(law.beta_a(), law.beta_b(), x);
    default:
      return law.lattice_cdf()(x);
  }
}

double mass_or_density(const Law& law, double x) {
  switch (law.kind()) {
    case LawKind::Uniform01: return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    case LawKind::Exponential1: return x < 0.0 ? 0.0 : std::exp(-x);
    case LawKind::Pareto: {
      const double a = law.alpha();
      return x < 1.0 ? 0.0 : a * std::pow(x, -a - 1.0);
    }
    case LawKind::Gumbel: return std::exp(-x - std::exp(-x));
    case LawKind::Frechet: {
      const double a = law.alpha();
      return x <= 0.0 ? 0.0 : a * std::pow(x, -a - 1.0) * std::exp(-std::pow(x, -a));
    }
    case LawKind::WeibullEVT: {
      const double b = law.shape_beta();
      return x >= 0.0 ? 0.0 : b * std::pow(-x, b - 1.0) * std::exp(-std::pow(-x, b));
    }
    case LawKind::Gaussian: {
      const double z = (x - law.mu());
      return std::exp(-z * z / (2.0 * law.sigma2())) /
             std::sqrt(2.0 * std::numbers::pi * law.sigma2());
    }
    case LawKind::Beta: {
      if (x < 0.0 || x > 1.0) return 0.0;
      const double a = law.beta_a(), b = law.beta_b();
      return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                      (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)));
    }
    default: break;
  }
  if (!is_integral(x)) return 0.0;
  const auto& support = law.table_support();
  if (x >= support.front() && x <= support.back()) {
    return law.table_masses()[static_cast<std::size_t>(x - support.front())];
  }
  // Off-table: either outside the support or in a cut tail.
  bool inside = x >= 0.0;
  switch (law.kind()) {
    case LawKind::Binomial: inside = inside && x <= static_cast<double>(law.trials()); break;
    case LawKind::Hypergeometric: {
      const double N = static_cast<double>(law.population());
      const double M = static_cast<double>(law.successes());
      const double n = static_cast<double>(law.draws());
      inside = x >= std::max(0.0, n - (N - M)) && x <= std::min(n, M);
      break;
    }
    case LawKind::NegBinomial: inside = x >= static_cast<double>(law.trials()); break;
    default: break;
  }
  return inside ? std::exp(log_pmf(law, x)) : 0.0;
}

std::complex<double> charfun(const Law& law, double u) {
  using namespace std::complex_literals;
  switch (law.kind()) {
    case LawKind::Gaussian:
      return std::exp(1i * u * law.mu() - 0.5 * law.sigma2() * u * u);
    case LawKind::Poisson: return std::exp(law.lambda() * (std::exp(1i * u) - 1.0));
    case LawKind::Binomial: {
      const double p = law.prob();
      return std::pow((1.0 - p) + p * std::exp(1i * u), static_cast<double>(law.trials()));
    }
    case LawKind::Exponential1: return 1.0 / (1.0 - 1i * u);
    case LawKind::Uniform01:
      if (u == 0.0) return 1.0;
      return (std::exp(1i * u) - 1.0) / (1i * u);
    default:
      throw UnsupportedCharFun("charfun: no closed form implemented for " + law.spec());
  }
}

double quantile(const Law& law, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("quantile: u must lie in (0,1), got " + std::to_string(u));
  }
  switch (law.kind()) {
    case LawKind::Uniform01: return u;
    case LawKind::Exponential1: return -std::log1p(-u);
    case LawKind::Pareto: return std::exp(-std::log1p(-u) / law.alpha());
    case LawKind::Gumbel: return -std::log(-std::log(u));
    case LawKind::Frechet: return std::pow(-std::log(u), -1.0 / law.alpha());
    case LawKind::WeibullEVT: return -std::pow(-std::log(u), 1.0 / law.shape_beta());
    case LawKind::Gaussian:
      return law.mu() - std::sqrt(2.0 * law.sigma2()) * boost::math::erfc_inv(2.0 * u);
    case LawKind::Beta: return boost::math::ibeta_inv(law.beta_a(), law.beta_b(), u);
    default:
      return generalized_inverse(law.lattice_cdf(), u);
  }
}

double left_limit(const Law& law, double x) {
  if (law.is_discrete()) return left_limit(law.lattice_cdf(), x);
  return cdf(law, x);
}

double cdf(const Distribution& d, double x) {
  return std::visit([x](const auto& F) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(F)>, Law>) return cdf(F, x);
    else return F(x);
  }, d);
}

double quantile(const Distribution& d, double u) {
  return std::visit([u](const auto& F) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(F)>, Law>) return quantile(F, u);
    else return generalized_inverse(F, u);
  }, d);
}

double left_limit(const Distribution& d, double x) {
  return std::visit([x](const auto& F) { return left_limit(F, x); }, d);
}

// ---------------------------------------------------------------------------
// Textual specs

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

class SpecArgs {
 public:
  SpecArgs(std::string_view kind, std::map<std::string, std::string> kv)
      : kind_(kind), kv_(std::move(kv)) {}

  double real(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) {
      if (fallback) return *fallback;
      throw LawSpecError(kind_ + ": missing parameter '" + key + "'");
    }
    const std::string text = it->second;
    kv_.erase(it);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw LawSpecError(kind_ + ": parameter '" + key + "' is not a number: " + text);
    }
    return v;
  }

  std::int64_t integer(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw LawSpecError(kind_ + ": missing parameter '" + key + "'");
    const std::string text = it->second;
    kv_.erase(it);
    std::int64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      // Accept integral reals such as "1e4".
      double d = 0.0;
      const auto rd = std::from_chars(text.data(), text.data() + text.size(), d);
      if (rd.ec != std::errc() || rd.ptr != text.data() + text.size() || !is_integral(d) ||
          std::abs(d) > 9.0e15) {
        throw LawSpecError(kind_ + ": parameter '" + key + "' is not an integer: " + text);
      }
      v = static_cast<std::int64_t>(d);
    }
    return v;
  }

  void finish() const {
    if (!kv_.empty()) {
      throw LawSpecError(kind_ + ": unknown parameter '" + kv_.begin()->first + "'");
    }
  }

 private:
  std::string kind_;
  std::map<std::string, std::string> kv_;
};

}  // namespace

Law parse_law(std::string_view spec) {
  spec = trim(spec);
  const auto colon = spec.find(':');
  const std::string kind(trim(spec.substr(0, colon)));
  std::map<std::string, std::string> kv;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw LawSpecError("law spec '" + std::string(spec) + "': expected key=value, got '" +
                           std::string(item) + "'");
      }
      const std::string key(trim(item.substr(0, eq)));
      if (!kv.emplace(key, std::string(trim(item.substr(eq + 1)))).second) {
        throw LawSpecError("law spec: duplicate key '" + key + "'");
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  SpecArgs args(kind, std::move(kv));
  auto done = [&](Law law) {
    args.finish();
    return law;
  };
  if (kind == "unif" || kind == "uniform") return done(Law::uniform01());
  if (kind == "exp" || kind == "exponential") return done(Law::exponential1());
  if (kind == "pareto") return done(Law::pareto(args.real("alpha")));
  if (kind == "gumbel") return done(Law::gumbel());
  if (kind == "frechet") return done(Law::frechet(args.real("alpha")));
  if (kind == "weibull") return done(Law::weibull_evt(args.real("beta")));
  if (kind == "poisson" || kind == "pois") return done(Law::poisson(args.real("lambda")));
  if (kind == "binom" || kind == "binomial") {
    const auto n = args.integer("n");
    return done(Law::binomial(n, args.real("p")));
  }
  if (kind == "hypergeom") {
    const auto N = args.integer("N");
    const auto M = args.integer("M");
    return done(Law::hypergeometric(N, M, args.integer("n")));
  }
  if (kind == "negbinom") {
    const auto k = args.integer("k");
    return done(Law::negbinomial(k, args.real("p")));
  }
  if (kind == "gauss" || kind == "normal") {
    const double mu = args.real("mu", 0.0);
    return done(Law::gaussian(mu, args.real("sigma2", 1.0)));
  }
  if (kind == "beta") {
    const double a = args.real("a");
    return done(Law::beta(a, args.real("b")));
  }
  throw LawSpecError("unknown law kind '" + kind + "'");
}

}  // namespace vague

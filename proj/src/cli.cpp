#include "vague/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include "vague/delta.hpp"
#include "vague/fep.hpp"
#include "vague/law.hpp"
#include "vague/limits.hpp"
#include "vague/metrics.hpp"
#include "vague/parallel.hpp"
#include "vague/rng.hpp"
#include "vague/sampling.hpp"

#ifndef VAGUE_VERSION
#define VAGUE_VERSION "0.0.0"
#endif

namespace vague::cli {

using json = nlohmann::json;

std::string version() { return VAGUE_VERSION; }

json to_json(const Report& r) {
  return json{{"family", r.family},
              {"params", r.params},
              {"n", r.n},
              {"reps", r.reps},
              {"seed", r.seed},
              {"metric_name", r.metric_name},
              {"metric_value", r.metric_value},
              {"tolerance", r.tolerance},
              {"pass", r.pass},
              {"wall_time", r.wall_time},
              {"version", r.version}};
}

Report report_from_json(const json& doc) {
  try {
    Report r;
    r.family = doc.at("family").get<std::string>();
    r.params = doc.at("params");
    r.n = doc.at("n").get<std::int64_t>();
    r.reps = doc.at("reps").get<std::int64_t>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.metric_name = doc.at("metric_name").get<std::string>();
    r.metric_value = doc.at("metric_value").get<double>();
    r.tolerance = doc.at("tolerance").get<double>();
    r.pass = doc.at("pass").get<bool>();
    r.wall_time = doc.at("wall_time").get<double>();
    r.version = doc.at("version").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed report: ") + e.what());
  }
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::uint64_t effective_seed(std::uint64_t flag) {
  const char* env = std::getenv("VAGUE_SEED");
  if (env == nullptr || *env == '\0') return flag;
  std::uint64_t seed = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto [ptr, ec] = std::from_chars(env, end, seed);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(std::string("VAGUE_SEED is not an unsigned 64-bit integer: '") + env + "'");
  }
  return seed;
}

void require_positive(const char* flag, std::int64_t v) {
  if (v < 1) throw DomainError(std::string("--") + flag + " must be >= 1, got " + std::to_string(v));
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::out | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

void close_output(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

/// Output file opened before any work so that an unwritable path fails fast.
struct Sink {
  std::string path;
  std::ofstream stream;

  explicit Sink(std::string p) : path(std::move(p)) {
    if (!path.empty()) stream = open_output(path);
  }
  bool active() const { return !path.empty(); }
  void close() {
    if (active()) close_output(stream, path);
  }
};

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

void print_matrix(std::ostream& out, const char* title, const Eigen::MatrixXd& m) {
  out << title << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "\t" : "  ") << fmt_short(m(i, j));
    out << "\n";
  }
}

void write_cov_csv(std::ostream& f, const Eigen::MatrixXd& emp, const Eigen::MatrixXd& th) {
  f << "i,j,empirical,theoretical\n";
  for (Eigen::Index i = 0; i < emp.rows(); ++i) {
    for (Eigen::Index j = 0; j < emp.cols(); ++j) {
      f << i << ',' << j << ',' << fmt(emp(i, j)) << ',' << fmt(th(i, j)) << '\n';
    }
  }
}

void write_values_csv(std::ostream& f, std::span<const double> values) {
  f << "replicate,value\n";
  for (std::size_t r = 0; r < values.size(); ++r) f << r << ',' << fmt(values[r]) << '\n';
}

/// Finalizes pass/version, writes the JSON report and prints a summary line.
int emit(Report& r, Sink& out_file, std::ostream& out) {
  r.pass = r.metric_value <= r.tolerance;
  r.version = version();
  if (out_file.active()) {
    out_file.stream << to_json(r).dump(2) << "\n";
    out_file.close();
  }
  out << r.family << ": " << r.metric_name << " = " << fmt_short(r.metric_value)
      << " (tolerance " << fmt_short(r.tolerance) << ") " << (r.pass ? "PASS" : "FAIL") << "\n";
  return r.pass ? kPass : kFail;
}

double pick_tolerance(double flag, double fallback) { return std::isnan(flag) ? fallback : flag; }

std::vector<double> read_sample_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::string field = line.substr(first, line.find(',', first) - first);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.pop_back();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      if (values.empty() && lineno == 1) continue;  // header
      throw DomainError(path + ":" + std::to_string(lineno) + ": not a number: '" + field + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw DomainError(path + ": no sample values");
  return values;
}

// ---------------------------------------------------------------------------
// Option storage. Every leaf subcommand owns one of these; its callback
// stores an action which run() executes after parsing succeeds.

struct Common {
  std::int64_t n = 1000;
  std::int64_t reps = 1000;
  std::uint64_t seed = 0;
  std::string out;
  std::string csv;
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c, bool stochastic) {
  app->add_option("--n", c.n, "Sample size")->capture_default_str();
  if (stochastic) {
    app->add_option("--reps", c.reps, "Monte Carlo replicates")->capture_default_str();
    app->add_option("--seed", c.seed, "Master seed (VAGUE_SEED overrides)")->capture_default_str();
    app->add_option("--threads", c.threads, "Worker threads (0: all cores)")->capture_default_str();
    app->add_option("--csv", c.csv, "Per-replicate CSV dump");
  }
  app->add_option("--out", c.out, "JSON report path");
  app->add_option("--tolerance", c.tolerance, "Pass threshold on the metric");
}

struct ExperimentOpts {
  LimitExperiment cfg;
  Common common;
  std::string law_spec;
  std::string cloud = "clt-binomial";
};

struct DeltaOpts {
  Common common;
  std::string map;
  std::vector<double> theta;
  std::vector<std::string> laws;
};

struct CorrelationOpts {
  Common common;
  double rho = std::numeric_limits<double>::quiet_NaN();
  std::string x_law;
  std::string y_law;
};

struct FidisOpts {
  Common common;
  std::vector<std::string> stats;
  std::string law = "gauss";
};

struct SampleOpts {
  std::string law;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  bool sorted = false;
  std::string out;
};

struct QuantileOpts {
  std::string law;
  std::vector<double> u;
};

struct DistanceOpts {
  std::string p, q, law, sample, out;
  double tolerance = std::numeric_limits<double>::quiet_NaN();
};

struct State {
  std::ostream* out = nullptr;
  std::function<int()> action;
  std::deque<ExperimentOpts> experiments;
  DeltaOpts delta;
  CorrelationOpts correlation;
  FidisOpts fidis;
  SampleOpts sample;
  QuantileOpts quantile;
  DistanceOpts distance;
};

// ---------------------------------------------------------------------------
// Actions

int do_quantile(const QuantileOpts& o, std::ostream& out) {
  const Law law = parse_law(o.law);
  out << "u\tquantile\n";
  for (double u : o.u) out << fmt(u) << '\t' << fmt(quantile(law, u)) << '\n';
  return kPass;
}

int do_sample(const SampleOpts& o, std::ostream& out) {
  require_positive("n", o.n);
  const Law law = parse_law(o.law);
  Sink sink(o.out);
  RngStream rng = substream(effective_seed(o.seed), 0);
  auto values = inverse_transform_draws(Distribution(law), rng, static_cast<std::size_t>(o.n));
  if (o.sorted) std::stable_sort(values.begin(), values.end());
  std::ostream& dst = sink.active() ? static_cast<std::ostream&>(sink.stream) : out;
  dst << "value\n";
  for (double v : values) dst << fmt(v) << '\n';
  sink.close();
  return kPass;
}

int do_tv(const DistanceOpts& o, std::ostream& out) {
  const Law p = parse_law(o.p);
  const Law q = parse_law(o.q);
  Sink sink(o.out);
  Stopwatch clock;
  Report r;
  r.family = "distance-tv";
  r.params = {{"p", p.spec()}, {"q", q.spec()}};
  r.metric_name = "tv";
  r.metric_value = tv_distance(discrete_table(p), discrete_table(q));
  r.tolerance = pick_tolerance(o.tolerance, 1.0);
  r.wall_time = clock.seconds();
  return emit(r, sink, out);
}

int do_ks(const DistanceOpts& o, std::ostream& out) {
  const Law law = parse_law(o.law);
  auto values = read_sample_csv(o.sample);
  Sink sink(o.out);
  Stopwatch clock;
  std::sort(values.begin(), values.end());
  Report r;
  r.family = "distance-ks";
  r.params = {{"law", law.spec()}, {"sample", o.sample}};
  r.n = static_cast<std::int64_t>(values.size());
  r.metric_name = "ks";
  r.metric_value = ks_distance(values, law);
  r.tolerance = pick_tolerance(o.tolerance, 1.0);
  r.wall_time = clock.seconds();
  return emit(r, sink, out);
}

json experiment_params(const ExperimentOpts& o) {
  const auto& c = o.cfg;
  json p = json::object();
  auto grid = [](const std::vector<double>& g) { return json(g); };
  switch (c.family) {
    case ExperimentFamily::EvtGumbel:
    case ExperimentFamily::EvtWeibull: p["naive"] = c.naive_maxima; break;
    case ExperimentFamily::EvtFrechet:
      p["alpha"] = c.alpha;
      p["naive"] = c.naive_maxima;
      break;
    case ExperimentFamily::CltBinomial:
    case ExperimentFamily::CltNegBinomial: p["p"] = c.p; break;
    case ExperimentFamily::CltPoisson: p["lambda"] = c.lambda; break;
    case ExperimentFamily::CltIid: p["law"] = c.base_law.spec(); break;
    case ExperimentFamily::Multinomial: p["probs"] = grid(c.probs); break;
    case ExperimentFamily::FidisEmpirical: p["grid"] = grid(c.grid); break;
    case ExperimentFamily::FidisPartialSum:
      p["grid"] = grid(c.grid);
      p["law"] = c.base_law.spec();
      break;
    case ExperimentFamily::TvHypBin:
      p["population"] = c.population;
      p["successes"] = c.successes;
      break;
    case ExperimentFamily::TvBinPoisson: p["lambda"] = c.lambda; break;
    case ExperimentFamily::LevyCf:
      p["cloud"] = family_name(c.cf_family);
      p["u"] = grid(c.u_grid);
      p["p"] = c.p;
      p["lambda"] = c.lambda;
      p["law"] = c.base_law.spec();
      break;
  }
  return p;
}

int do_experiment(ExperimentOpts& o, std::ostream& out) {
  LimitExperiment cfg = o.cfg;
  cfg.n = o.common.n;
  cfg.reps = o.common.reps;
  cfg.seed = effective_seed(o.common.seed);
  cfg.threads = o.common.threads;
  require_positive("n", cfg.n);
  require_positive("reps", cfg.reps);
  if (!o.law_spec.empty()) cfg.base_law = parse_law(o.law_spec);
  if (cfg.family == ExperimentFamily::LevyCf) {
    const auto cloud = family_from_name(o.cloud);
    if (!cloud) throw UsageError("--cloud: unknown family '" + o.cloud + "'");
    cfg.cf_family = *cloud;
  }
  cfg.validate();
  Sink sink(o.common.out);
  Sink csv(o.common.csv);

  Stopwatch clock;
  const ExperimentReport rep = run_experiment(cfg);
  Report r;
  r.family = rep.family;
  o.cfg = cfg;
  r.params = experiment_params(o);
  r.n = cfg.n;
  r.reps = cfg.reps;
  r.seed = cfg.seed;
  r.metric_name = rep.metric_name;
  r.metric_value = rep.metric_value;
  r.tolerance = pick_tolerance(o.common.tolerance, default_tolerance(cfg.family));
  if (rep.empirical_cov.size() > 0) {
    print_matrix(out, "empirical covariance", rep.empirical_cov);
    print_matrix(out, "limit covariance", rep.theoretical_cov);
  }
  if (csv.active()) {
    if (!rep.replicate_values.empty()) {
      write_values_csv(csv.stream, rep.replicate_values);
    } else if (rep.empirical_cov.size() > 0) {
      write_cov_csv(csv.stream, rep.empirical_cov, rep.theoretical_cov);
    } else {
      csv.stream << "metric,value\n" << rep.metric_name << ',' << fmt(rep.metric_value) << '\n';
    }
    csv.close();
  }
  r.wall_time = clock.seconds();
  return emit(r, sink, out);
}

int do_delta(const DeltaOpts& o, std::ostream& out) {
  require_positive("n", o.common.n);
  require_positive("reps", o.common.reps);
  if (o.theta.empty()) throw UsageError("--theta: at least one coordinate is required");
  const auto dim = static_cast<Eigen::Index>(o.theta.size());
  const SmoothMap map = builtin_map(o.map, dim);
  std::vector<Law> laws;
  if (o.laws.empty()) {
    for (double t : o.theta) laws.push_back(Law::gaussian(t, 1.0));
  } else {
    if (o.laws.size() != o.theta.size()) {
      throw UsageError("--law must be given once per --theta coordinate");
    }
    for (const auto& s : o.laws) laws.push_back(parse_law(s));
  }
  const Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(o.theta.data(), dim);
  const std::uint64_t seed = effective_seed(o.common.seed);
  Sink sink(o.common.out);
  Sink csv(o.common.csv);

  Stopwatch clock;
  const DeltaReport rep =
      mc_delta_verify(map, theta, laws, o.common.n, o.common.reps, seed, o.common.threads);
  print_matrix(out, "delta-method covariance", rep.predicted_cov);
  print_matrix(out, "empirical covariance", rep.empirical_cov);
  if (csv.active()) {
    write_cov_csv(csv.stream, rep.empirical_cov, rep.predicted_cov);
    csv.close();
  }
  Report r;
  r.family = "delta-verify";
  json law_specs = json::array();
  for (const auto& l : laws) law_specs.push_back(l.spec());
  r.params = {{"map", o.map},
              {"theta", o.theta},
              {"laws", law_specs},
              {"predicted_cov", matrix_json(rep.predicted_cov)},
              {"empirical_cov", matrix_json(rep.empirical_cov)}};
  r.n = o.common.n;
  r.reps = o.common.reps;
  r.seed = seed;
  r.metric_name = "max_rel_cov_err";
  r.metric_value = rep.max_rel_err;
  r.tolerance = pick_tolerance(o.common.tolerance, 0.1);
  r.wall_time = clock.seconds();
  return emit(r, sink, out);
}

int do_correlation(const CorrelationOpts& o, std::ostream& out) {
  require_positive("n", o.common.n);
  require_positive("reps", o.common.reps);
  const bool independent = !o.x_law.empty() || !o.y_law.empty();
  if (independent && !std::isnan(o.rho)) {
    throw UsageError("--rho cannot be combined with --x-law/--y-law");
  }
  if (independent && (o.x_law.empty() || o.y_law.empty())) {
    throw UsageError("--x-law and --y-law go together");
  }
  CorrelationLaw law = BivariateGaussian{std::isnan(o.rho) ? 0.5 : o.rho};
  json params;
  if (independent) {
    law = IndependentPair{parse_law(o.x_law), parse_law(o.y_law)};
    const auto& pair = std::get<IndependentPair>(law);
    params = {{"x_law", pair.x.spec()}, {"y_law", pair.y.spec()}};
  } else {
    const double rho = std::get<BivariateGaussian>(law).rho;
    if (!(rho > -1.0 && rho < 1.0)) throw DomainError("--rho must lie in (-1, 1)");
    params = {{"rho", rho}};
  }
  const std::uint64_t seed = effective_seed(o.common.seed);
  Sink sink(o.common.out);
  Sink csv(o.common.csv);

  Stopwatch clock;
  const CorrelationReport rep =
      correlation_experiment(law, o.common.n, o.common.reps, seed, o.common.threads);
  if (csv.active()) {
    write_values_csv(csv.stream, rep.root_n_deviation);
    csv.close();
  }
  params["predicted_sigma2"] = rep.predicted_sigma2;
  params["empirical_var"] = rep.empirical_var_of_root_n_rho;
  params["rejection_rate"] = rep.rejection_rate;
  Report r;
  r.family = "fep-correlation";
  r.params = params;
  r.n = o.common.n;
  r.reps = o.common.reps;
  r.seed = seed;
  if (independent) {
    r.metric_name = "rejection_rate_gap";
    r.metric_value = std::abs(rep.rejection_rate - 0.05);
    r.tolerance = pick_tolerance(o.common.tolerance, 0.01);
  } else {
    r.metric_name = "rel_var_err";
    r.metric_value = std::abs(rep.empirical_var_of_root_n_rho / rep.predicted_sigma2 - 1.0);
    r.tolerance = pick_tolerance(o.common.tolerance, 0.1);
  }
  out << "predicted sigma^2 = " << fmt_short(rep.predicted_sigma2)
      << ", empirical variance = " << fmt_short(rep.empirical_var_of_root_n_rho)
      << ", rejection rate = " << fmt_short(rep.rejection_rate) << "\n";
  r.wall_time = clock.seconds();
  return emit(r, sink, out);
}

int do_fidis(const FidisOpts& o, std::ostream& out) {
  require_positive("n", o.common.n);
  require_positive("reps", o.common.reps);
  if (o.stats.empty()) throw UsageError("--stats: at least one statistic is required");
  std::vector<Statistic> stats;
  for (const auto& s : o.stats) stats.push_back(parse_statistic(s));
  const Law law = parse_law(o.law);
  const GaussianLimit limit = fidi_limit(stats, law);
  std::vector<double> means;
  for (const auto& f : stats) means.push_back(expectation(f, law));
  const std::uint64_t seed = effective_seed(o.common.seed);
  Sink sink(o.common.out);
  Sink csv(o.common.csv);

  Stopwatch clock;
  const auto k = static_cast<Eigen::Index>(stats.size());
  const auto n = static_cast<std::size_t>(o.common.n);
  Eigen::MatrixXd reps(o.common.reps, k);
  for_each_replicate(
      static_cast<std::size_t>(o.common.reps),
      [&](std::size_t r) {
        RngStream rng = substream(seed, r);
        std::vector<Observation> sample(n);
        for (auto& z : sample) z.x = quantile(law, rng.uniform());
        for (Eigen::Index j = 0; j < k; ++j) {
          const auto sj = static_cast<std::size_t>(j);
          reps(static_cast<Eigen::Index>(r), j) = fep_evaluate(sample, stats[sj], means[sj]);
        }
      },
      o.common.threads);
  const Eigen::MatrixXd emp = empirical_cov(reps);
  print_matrix(out, "limit covariance", limit.cov);
  print_matrix(out, "empirical covariance", emp);
  if (csv.active()) {
    write_cov_csv(csv.stream, emp, limit.cov);
    csv.close();
  }
  Report r;
  r.family = "fep-fidis";
  r.params = {{"stats", o.stats},
              {"law", law.spec()},
              {"limit_cov", matrix_json(limit.cov)},
              {"empirical_cov", matrix_json(emp)}};
  r.n = o.common.n;
  r.reps = o.common.reps;
  r.seed = seed;
  r.metric_name = "max_rel_cov_err";
  const double scale = std::max(limit.cov.cwiseAbs().maxCoeff(), 1e-300);
  r.metric_value = (emp - limit.cov).cwiseAbs().maxCoeff() / scale;
  r.tolerance = pick_tolerance(o.common.tolerance, 0.1);
  r.wall_time = clock.seconds();
  return emit(r, sink, out);
}

// ---------------------------------------------------------------------------
// Parser tree

const char* family_help(ExperimentFamily f) {
  switch (f) {
    case ExperimentFamily::EvtGumbel: return "Maxima of Exp(1) minus log n vs Gumbel";
    case ExperimentFamily::EvtFrechet: return "Pareto maxima over n^(1/alpha) vs Frechet";
    case ExperimentFamily::EvtWeibull: return "n (M_n - 1) for uniform maxima vs Weibull";
    case ExperimentFamily::CltBinomial: return "Standardized Binomial(n, p) vs N(0,1)";
    case ExperimentFamily::CltPoisson: return "Standardized Poisson(lambda) vs N(0,1)";
    case ExperimentFamily::CltNegBinomial: return "Standardized negative binomial (k = n) vs N(0,1)";
    case ExperimentFamily::CltIid: return "Standardized iid sample mean vs N(0,1)";
    case ExperimentFamily::Multinomial: return "Multinomial count vector covariance";
    case ExperimentFamily::FidisEmpirical: return "Uniform empirical process on a grid";
    case ExperimentFamily::FidisPartialSum: return "Partial-sum process on a grid";
    case ExperimentFamily::TvHypBin: return "Exact TV, hypergeometric vs binomial";
    case ExperimentFamily::TvBinPoisson: return "Exact TV, binomial vs Poisson";
    case ExperimentFamily::LevyCf: return "Empirical characteristic function of a CLT cloud";
  }
  return "";
}

void add_experiment(CLI::App* parent, State& st, ExperimentFamily f) {
  auto& o = st.experiments.emplace_back();
  o.cfg.family = f;
  o.common.n = 10000;
  o.common.reps = 10000;
  auto* app = parent->add_subcommand(family_name(f), family_help(f));
  switch (f) {
    case ExperimentFamily::EvtFrechet:
      app->add_option("--alpha", o.cfg.alpha, "Pareto tail index")->capture_default_str();
      [[fallthrough]];
    case ExperimentFamily::EvtGumbel:
    case ExperimentFamily::EvtWeibull:
      app->add_flag("--naive", o.cfg.naive_maxima, "Simulate all n draws per maximum");
      break;
    case ExperimentFamily::CltBinomial:
    case ExperimentFamily::CltNegBinomial:
      app->add_option("--p", o.cfg.p, "Success probability")->capture_default_str();
      break;
    case ExperimentFamily::CltPoisson:
      app->add_option("--lambda", o.cfg.lambda, "Poisson mean (0: lambda = n)")
          ->capture_default_str();
      break;
    case ExperimentFamily::CltIid:
      o.law_spec = "exp";
      app->add_option("--law", o.law_spec, "Base law spec")->capture_default_str();
      break;
    case ExperimentFamily::Multinomial:
      o.common.n = 500;
      o.common.reps = 20000;
      o.cfg.probs = {0.2, 0.3, 0.5};
      app->add_option("--probs", o.cfg.probs, "Cell probabilities")
          ->delimiter(',')
          ->capture_default_str();
      break;
    case ExperimentFamily::FidisEmpirical:
      o.cfg.grid = {0.25, 0.5, 0.75};
      app->add_option("--grid", o.cfg.grid, "Evaluation grid in (0,1)")
          ->delimiter(',')
          ->capture_default_str();
      break;
    case ExperimentFamily::FidisPartialSum:
      o.common.n = 1000;
      o.cfg.grid = {0.25, 0.5, 0.75, 1.0};
      o.law_spec = "gauss";
      app->add_option("--grid", o.cfg.grid, "Evaluation grid in (0,1]")
          ->delimiter(',')
          ->capture_default_str();
      app->add_option("--law", o.law_spec, "Increment law (mean 0, variance 1)")
          ->capture_default_str();
      break;
    case ExperimentFamily::TvHypBin:
      o.common.n = 10;
      o.cfg.population = 1000;
      o.cfg.successes = 300;
      app->add_option("--population", o.cfg.population, "Urn size N")->capture_default_str();
      app->add_option("--successes", o.cfg.successes, "Marked balls M")->capture_default_str();
      break;
    case ExperimentFamily::TvBinPoisson:
      o.common.n = 1000;
      o.cfg.lambda = 1.0;
      app->add_option("--lambda", o.cfg.lambda, "Poisson mean")->capture_default_str();
      break;
    case ExperimentFamily::LevyCf:
      o.law_spec = "exp";
      app->add_option("--cloud", o.cloud, "CLT family generating the cloud")
          ->capture_default_str();
      app->add_option("--u", o.cfg.u_grid, "Frequencies (default +-1..5)")->delimiter(',');
      app->add_option("--p", o.cfg.p, "Cloud success probability")->capture_default_str();
      app->add_option("--lambda", o.cfg.lambda, "Cloud Poisson mean (0: n)")
          ->capture_default_str();
      app->add_option("--law", o.law_spec, "Cloud base law (clt-iid)")->capture_default_str();
      break;
  }
  const bool stochastic =
      f != ExperimentFamily::TvHypBin && f != ExperimentFamily::TvBinPoisson;
  add_common(app, o.common, stochastic);
  app->callback([&st, &o] { st.action = [&st, &o] { return do_experiment(o, *st.out); }; });
}

void build(CLI::App& app, State& st) {
  app.require_subcommand(1);

  auto* q = app.add_subcommand("quantile", "Generalized inverse F^-1(u) of a law");
  q->add_option("--law", st.quantile.law, "Law spec, e.g. binom:n=100,p=0.3")->required();
  q->add_option("--u", st.quantile.u, "Levels in (0,1)")->delimiter(',')->required();
  q->callback([&st] { st.action = [&st] { return do_quantile(st.quantile, *st.out); }; });

  auto* s = app.add_subcommand("sample", "Inverse-transform sample of a law");
  s->add_option("--law", st.sample.law, "Law spec")->required();
  s->add_option("--n", st.sample.n, "Sample size")->required();
  s->add_option("--seed", st.sample.seed, "Master seed (VAGUE_SEED overrides)")
      ->capture_default_str();
  s->add_flag("--sorted", st.sample.sorted, "Emit order statistics");
  s->add_option("--out", st.sample.out, "CSV path (default: stdout)");
  s->callback([&st] { st.action = [&st] { return do_sample(st.sample, *st.out); }; });

  auto* d = app.add_subcommand("distance", "Distances between laws");
  d->require_subcommand(1);
  auto* tv = d->add_subcommand("tv", "Exact total variation between discrete laws");
  tv->add_option("--p", st.distance.p, "First law spec")->required();
  tv->add_option("--q", st.distance.q, "Second law spec")->required();
  tv->add_option("--tolerance", st.distance.tolerance, "Pass threshold");
  tv->add_option("--out", st.distance.out, "JSON report path");
  tv->callback([&st] { st.action = [&st] { return do_tv(st.distance, *st.out); }; });
  auto* ks = d->add_subcommand("ks", "Kolmogorov-Smirnov distance of a CSV sample to a law");
  ks->add_option("--law", st.distance.law, "Continuous law spec")->required();
  ks->add_option("--sample", st.distance.sample, "CSV file, first column")->required();
  ks->add_option("--tolerance", st.distance.tolerance, "Pass threshold");
  ks->add_option("--out", st.distance.out, "JSON report path");
  ks->callback([&st] { st.action = [&st] { return do_ks(st.distance, *st.out); }; });

  auto* e = app.add_subcommand("experiment", "Seeded Monte Carlo limit experiments");
  e->require_subcommand(1);
  for (ExperimentFamily f : all_families()) add_experiment(e, st, f);

  auto* dl = app.add_subcommand("delta", "Delta method");
  dl->require_subcommand(1);
  auto* dv = dl->add_subcommand("verify", "Monte Carlo check of J Sigma J' for a builtin map");
  std::string maps;
  for (const auto& m : builtin_map_names()) maps += (maps.empty() ? "" : ", ") + m;
  dv->add_option("--map", st.delta.map, "Builtin map: " + maps)->required();
  dv->add_option("--theta", st.delta.theta, "Base-law mean vector")->delimiter(',')->required();
  dv->add_option("--law", st.delta.laws, "Base law per coordinate (default gauss:mu=theta_j)");
  st.delta.common.n = 5000;
  st.delta.common.reps = 10000;
  add_common(dv, st.delta.common, true);
  dv->callback([&st] { st.action = [&st] { return do_delta(st.delta, *st.out); }; });

  auto* fp = app.add_subcommand("fep", "Functional empirical process");
  fp->require_subcommand(1);
  auto* fc = fp->add_subcommand("correlation", "Asymptotic law of the sample correlation");
  fc->add_option("--rho", st.correlation.rho, "Bivariate Gaussian correlation (default 0.5)");
  fc->add_option("--x-law", st.correlation.x_law, "Independent first coordinate");
  fc->add_option("--y-law", st.correlation.y_law, "Independent second coordinate");
  st.correlation.common.n = 2000;
  st.correlation.common.reps = 5000;
  add_common(fc, st.correlation.common, true);
  fc->callback([&st] { st.action = [&st] { return do_correlation(st.correlation, *st.out); }; });
  auto* ff = fp->add_subcommand("fidis", "Gaussian limit of (G_n f_1, ..., G_n f_k)");
  ff->add_option("--stats", st.fidis.stats, "Statistics, e.g. x,x2")->delimiter(',')->required();
  ff->add_option("--law", st.fidis.law, "Law spec")->capture_default_str();
  st.fidis.common.n = 500;
  st.fidis.common.reps = 10000;
  add_common(ff, st.fidis.common, true);
  ff->callback([&st] { st.action = [&st] { return do_fidis(st.fidis, *st.out); }; });
}

void collect_leaves(const CLI::App* app, const std::string& prefix, std::vector<std::string>& out) {
  const auto subs = app->get_subcommands([](const CLI::App*) { return true; });
  if (subs.empty()) {
    out.push_back(prefix);
    return;
  }
  for (const auto* sub : subs) {
    collect_leaves(sub, prefix.empty() ? sub->get_name() : prefix + " " + sub->get_name(), out);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  State st;
  st.out = &out;
  CLI::App app("Weak convergence experiments: quantiles, distances, limit theorems", "vague");
  app.set_version_flag("--version", version());
  build(app, st);

  std::vector<const char*> argv{"vague"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }
  if (!st.action) {
    err << app.help();
    return kUsage;
  }
  try {
    return st.action();
  } catch (const LawSpecError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

std::vector<std::string> command_inventory() {
  State st;
  CLI::App app("vague");
  build(app, st);
  std::vector<std::string> leaves;
  collect_leaves(&app, "", leaves);
  return leaves;
}

std::vector<std::pair<std::string, std::string>> operation_commands() {
  std::vector<std::pair<std::string, std::string>> ops = {
      {"quantile", "quantile"},
      {"inverse_transform_sample", "sample"},
      {"tv_distance", "distance tv"},
      {"ks_distance", "distance ks"},
      {"mc_delta_verify", "delta verify"},
      {"correlation_experiment", "fep correlation"},
      {"fidi_limit", "fep fidis"},
  };
  for (ExperimentFamily f : all_families()) {
    ops.emplace_back("run_experiment(" + family_name(f) + ")", "experiment " + family_name(f));
  }
  return ops;
}

}  // namespace vague::cli

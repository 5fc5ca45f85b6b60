#include "vague/delta.hpp"

#include <algorithm>
#include <cmath>

#include "vague/errors.hpp"
#include "vague/metrics.hpp"
#include "vague/parallel.hpp"
#include "vague/rng.hpp"

namespace vague {

Eigen::MatrixXd finite_difference_jacobian(const SmoothMap& map, const Eigen::VectorXd& theta) {
  Eigen::MatrixXd fd(map.dim_out, map.dim_in);
  for (Eigen::Index j = 0; j < map.dim_in; ++j) {
    const double h = 1e-5 * std::max(1.0, std::abs(theta(j)));
    Eigen::VectorXd up = theta, down = theta;
    up(j) += h;
    down(j) -= h;
    fd.col(j) = (map.evaluate(up) - map.evaluate(down)) / (up(j) - down(j));
  }
  return fd;
}

void verify_jacobian(const SmoothMap& map, const Eigen::VectorXd& theta, double rel_tol) {
  if (theta.size() != map.dim_in) throw ShapeError("verify_jacobian: theta has wrong dimension");
  const Eigen::MatrixXd J = map.jacobian(theta);
  if (J.rows() != map.dim_out || J.cols() != map.dim_in) {
    throw ShapeError("verify_jacobian: Jacobian has wrong shape");
  }
  const Eigen::MatrixXd fd = finite_difference_jacobian(map, theta);
  for (Eigen::Index i = 0; i < J.rows(); ++i) {
    for (Eigen::Index j = 0; j < J.cols(); ++j) {
      if (std::abs(J(i, j) - fd(i, j)) > rel_tol * std::max(1.0, std::abs(J(i, j)))) {
        throw JacobianMismatch("verify_jacobian: '" + map.name + "' entry (" + std::to_string(i) +
                               "," + std::to_string(j) + ") is " + std::to_string(J(i, j)) +
                               ", finite differences give " + std::to_string(fd(i, j)));
      }
    }
  }
}

namespace {

template <typename F, typename D>
SmoothMap coordinatewise(const std::string& name, Eigen::Index dim, F f, D df) {
  return {name, dim, dim,
          [f](const Eigen::VectorXd& x) { return Eigen::VectorXd(x.unaryExpr(f)); },
          [df](const Eigen::VectorXd& x) {
            return Eigen::MatrixXd(x.unaryExpr(df).asDiagonal());
          }};
}

}  // namespace

SmoothMap builtin_map(const std::string& name, Eigen::Index dim) {
  if (dim < 1) throw ShapeError("builtin_map: dimension must be >= 1");
  if (name == "square") {
    return coordinatewise(name, dim, [](double x) { return x * x; },
                          [](double x) { return 2.0 * x; });
  }
  if (name == "inverse") {
    return coordinatewise(name, dim, [](double x) { return 1.0 / x; },
                          [](double x) { return -1.0 / (x * x); });
  }
  if (name == "log") {
    return coordinatewise(name, dim, [](double x) { return std::log(x); },
                          [](double x) { return 1.0 / x; });
  }
  if (name == "exp") {
    return coordinatewise(name, dim, [](double x) { return std::exp(x); },
                          [](double x) { return std::exp(x); });
  }
  if (name == "ratio") {
    if (dim != 2) throw ShapeError("builtin_map: ratio takes exactly 2 coordinates");
    return {name, 2, 1,
            [](const Eigen::VectorXd& v) { return Eigen::VectorXd::Constant(1, v(0) / v(1)); },
            [](const Eigen::VectorXd& v) {
              Eigen::MatrixXd J(1, 2);
              J << 1.0 / v(1), -v(0) / (v(1) * v(1));
              return J;
            }};
  }
  throw DomainError("builtin_map: unknown map '" + name + "'");
}

std::vector<std::string> builtin_map_names() { return {"square", "inverse", "ratio", "log", "exp"}; }

double delta_univariate(double gprime_at_theta, double limit_var) {
  if (limit_var < 0.0) throw DomainError("delta_univariate: negative variance");
  return gprime_at_theta * gprime_at_theta * limit_var;
}

namespace {

void check_sigma(const Eigen::MatrixXd& sigma, const char* what) {
  if (sigma.rows() != sigma.cols()) throw ShapeError(std::string(what) + ": Sigma must be square");
  if (sigma.size() > 0 && (sigma - sigma.transpose()).cwiseAbs().maxCoeff() >
                              1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
    throw DomainError(std::string(what) + ": Sigma must be symmetric");
  }
}

}  // namespace

double delta_gradient(const Eigen::VectorXd& grad, const Eigen::MatrixXd& sigma) {
  check_sigma(sigma, "delta_gradient");
  if (grad.size() != sigma.rows()) throw ShapeError("delta_gradient: shape mismatch");
  return grad.dot(sigma * grad);
}

Eigen::MatrixXd delta_jacobian(const Eigen::MatrixXd& jacobian, const Eigen::MatrixXd& sigma) {
  check_sigma(sigma, "delta_jacobian");
  if (jacobian.cols() != sigma.rows()) throw ShapeError("delta_jacobian: shape mismatch");
  const Eigen::MatrixXd out = jacobian * sigma * jacobian.transpose();
  return 0.5 * (out + out.transpose());
}

DeltaReport mc_delta_verify(const SmoothMap& map, const Eigen::VectorXd& theta,
                            std::span<const Law> base_laws, std::int64_t n, std::int64_t reps,
                            std::uint64_t seed, unsigned threads) {
  if (n < 1 || reps < 2) throw DomainError("mc_delta_verify: need n >= 1 and reps >= 2");
  if (theta.size() != map.dim_in || static_cast<Eigen::Index>(base_laws.size()) != map.dim_in) {
    throw ShapeError("mc_delta_verify: theta and base laws must match the map's input dimension");
  }
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(map.dim_in, map.dim_in);
  for (Eigen::Index j = 0; j < map.dim_in; ++j) {
    const Law& law = base_laws[static_cast<std::size_t>(j)];
    if (!std::isfinite(law.variance())) {
      throw DomainError("mc_delta_verify: base law " + law.spec() + " has infinite variance");
    }
    if (std::abs(theta(j) - law.mean()) > 1e-12 * std::max(1.0, std::abs(law.mean()))) {
      throw DomainError("mc_delta_verify: theta must equal the base-law mean vector");
    }
    sigma(j, j) = law.variance();
  }
  verify_jacobian(map, theta);

  DeltaReport report;
  report.predicted_cov = delta_jacobian(map.jacobian(theta), sigma);
  const Eigen::VectorXd g_theta = map.evaluate(theta);
  const double root_n = std::sqrt(static_cast<double>(n));
  report.replicates.resize(reps, map.dim_out);
  for_each_replicate(
      static_cast<std::size_t>(reps),
      [&](std::size_t r) {
        RngStream rng = substream(seed, r);
        Eigen::VectorXd mean(map.dim_in);
        for (Eigen::Index j = 0; j < map.dim_in; ++j) {
          const Law& law = base_laws[static_cast<std::size_t>(j)];
          double s = 0.0;
          for (std::int64_t i = 0; i < n; ++i) s += quantile(law, rng.uniform());
          mean(j) = s / static_cast<double>(n);
        }
        report.replicates.row(static_cast<Eigen::Index>(r)) =
            (root_n * (map.evaluate(mean) - g_theta)).transpose();
      },
      threads);
  report.empirical_cov = empirical_cov(report.replicates);
  const Eigen::MatrixXd diff = (report.empirical_cov - report.predicted_cov).cwiseAbs();
  report.max_abs_err = diff.maxCoeff();
  for (Eigen::Index i = 0; i < diff.rows(); ++i) {
    for (Eigen::Index j = 0; j < diff.cols(); ++j) {
      const double pred = std::abs(report.predicted_cov(i, j));
      if (pred > 1e-12) report.max_rel_err = std::max(report.max_rel_err, diff(i, j) / pred);
    }
  }
  return report;
}

}  // namespace vague

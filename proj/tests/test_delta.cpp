#include <doctest.h>

#include <cmath>
#include <random>

#include "vague/delta.hpp"
#include "vague/errors.hpp"
#include "vague/limits.hpp"

using namespace vague;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& gen, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = z(gen);
  }
  return m;
}

SmoothMap linear_map(const Eigen::MatrixXd& A, const std::string& name) {
  return {name, A.cols(), A.rows(), [A](const Eigen::VectorXd& x) { return Eigen::VectorXd(A * x); },
          [A](const Eigen::VectorXd&) { return A; }};
}

}  // namespace

TEST_CASE("univariate and gradient forms") {
  CHECK(delta_univariate(2.0, 1.0) == 4.0);
  CHECK(delta_univariate(0.0, 3.0) == 0.0);
  CHECK_THROWS_AS(delta_univariate(1.0, -1.0), DomainError);
  CHECK(delta_gradient(Eigen::Vector2d(1.0, 0.0), Eigen::Matrix2d::Identity()) == 1.0);
  CHECK(delta_gradient(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity()) == 0.0);
  Eigen::Matrix2d s;
  s << 1.0, -1.0, -1.0, 1.0;
  CHECK(delta_gradient(Eigen::Vector2d(1.0, 1.0), s) == 0.0);
  Eigen::Matrix2d asym;
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(delta_gradient(Eigen::Vector2d(1.0, 1.0), asym), DomainError);
  CHECK_THROWS_AS(delta_gradient(Eigen::Vector3d(1.0, 1.0, 1.0), s), ShapeError);
}

TEST_CASE("matrix form") {
  Eigen::Matrix2d s;
  s << 2.0, 0.3, 0.3, 1.0;
  CHECK(delta_jacobian(Eigen::Matrix2d::Identity(), s) == s);
  Eigen::Matrix2d j;
  j << 1.0, 2.0, 0.0, 0.0;
  const auto out = delta_jacobian(j, s);
  CHECK(out(1, 1) == 0.0);
  CHECK(out(0, 1) == 0.0);
  CHECK(out(1, 0) == 0.0);
  CHECK_THROWS_AS(delta_jacobian(Eigen::MatrixXd::Identity(3, 3), s), ShapeError);
}

TEST_CASE("J Sigma J' is symmetric PSD") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index k = 1 + gen() % 5, m = 1 + gen() % 5;
    const Eigen::MatrixXd A = random_matrix(gen, k, k);
    const Eigen::MatrixXd out = delta_jacobian(random_matrix(gen, m, k), A.transpose() * A);
    CHECK(out == out.transpose());
    CHECK(cholesky_psd(out, 1e-10 * std::max(1.0, out.cwiseAbs().maxCoeff())));
  }
}

TEST_CASE("linearizations compose") {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index k = 1 + gen() % 4, m = 1 + gen() % 4, p = 1 + gen() % 4;
    const Eigen::MatrixXd A = random_matrix(gen, k, k);
    const Eigen::MatrixXd sigma = A.transpose() * A;
    const Eigen::MatrixXd J1 = random_matrix(gen, m, k);
    const Eigen::MatrixXd J2 = random_matrix(gen, p, m);
    const Eigen::MatrixXd direct = delta_jacobian(J2 * J1, sigma);
    const Eigen::MatrixXd chained = delta_jacobian(J2, delta_jacobian(J1, sigma));
    CHECK((direct - chained).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, direct.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("builtin Jacobians match finite differences") {
  for (const auto& name : builtin_map_names()) {
    const Eigen::Index dim = name == "ratio" ? 2 : 3;
    const auto map = builtin_map(name, dim);
    Eigen::VectorXd theta(dim);
    for (Eigen::Index j = 0; j < dim; ++j) theta(j) = 0.7 + 0.9 * j;
    CHECK_NOTHROW(verify_jacobian(map, theta));
  }
  auto wrong = builtin_map("square", 1);
  wrong.jacobian = [](const Eigen::VectorXd& x) { return Eigen::MatrixXd::Constant(1, 1, 3.0 * x(0)); };
  CHECK_THROWS_AS(verify_jacobian(wrong, Eigen::VectorXd::Constant(1, 1.5)), JacobianMismatch);
  CHECK_THROWS_AS(builtin_map("ratio", 3), ShapeError);
  CHECK_THROWS_AS(builtin_map("sqrt", 1), DomainError);
}

TEST_CASE("Monte Carlo verification") {
  SUBCASE("square of an exponential mean") {
    const Law base[] = {Law::exponential1()};
    const auto rep = mc_delta_verify(builtin_map("square"), Eigen::VectorXd::Constant(1, 1.0), base,
                                     5000, 10000, 42);
    CHECK(rep.predicted_cov(0, 0) == doctest::Approx(4.0));
    CHECK(std::abs(rep.empirical_cov(0, 0) / 4.0 - 1.0) <= 0.1);
  }
  SUBCASE("identity map") {
    const Law base[] = {Law::exponential1(), Law::uniform01()};
    const Eigen::Vector2d theta(1.0, 0.5);
    const auto rep = mc_delta_verify(linear_map(Eigen::Matrix2d::Identity(), "identity"), theta, base,
                                     200, 5000, 7);
    CHECK(rep.predicted_cov(0, 0) == 1.0);
    CHECK(rep.predicted_cov(1, 1) == doctest::Approx(1.0 / 12));
    CHECK(rep.empirical_cov(0, 0) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(rep.empirical_cov(1, 1) == doctest::Approx(1.0 / 12).epsilon(0.1));
  }
  SUBCASE("constant map") {
    const Law base[] = {Law::gaussian(0.0, 1.0)};
    const auto rep = mc_delta_verify(linear_map(Eigen::MatrixXd::Zero(1, 1), "zero"),
                                     Eigen::VectorXd::Zero(1), base, 100, 1000, 7);
    CHECK(rep.empirical_cov.cwiseAbs().maxCoeff() <= 1e-2);
    CHECK(rep.max_rel_err == 0.0);
  }
  SUBCASE("ratio") {
    const Law base[] = {Law::gaussian(1.0, 1.0), Law::gaussian(2.0, 1.0)};
    const Eigen::Vector2d theta(1.0, 2.0);
    const auto rep = mc_delta_verify(builtin_map("ratio", 2), theta, base, 1000, 5000, 9);
    const Eigen::Vector2d grad(0.5, -0.25);
    CHECK(rep.predicted_cov(0, 0) == doctest::Approx(grad.squaredNorm()));
    CHECK(rep.max_rel_err <= 0.1);
  }
  SUBCASE("reproducible across thread counts") {
    const Law base[] = {Law::exponential1()};
    const auto a = mc_delta_verify(builtin_map("log"), Eigen::VectorXd::Constant(1, 1.0), base, 50, 300, 3, 1);
    const auto b = mc_delta_verify(builtin_map("log"), Eigen::VectorXd::Constant(1, 1.0), base, 50, 300, 3, 4);
    CHECK(a.replicates == b.replicates);
  }
  const Law base[] = {Law::exponential1()};
  CHECK_THROWS_AS(mc_delta_verify(builtin_map("square"), Eigen::VectorXd::Constant(1, 2.0), base, 10, 10, 1),
                  DomainError);
  const Law heavy[] = {Law::pareto(1.5)};
  CHECK_THROWS_AS(mc_delta_verify(builtin_map("square"), Eigen::VectorXd::Constant(1, 3.0), heavy, 10, 10, 1),
                  DomainError);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vague/errors.hpp"
#include "vague/metrics.hpp"
#include "vague/sampling.hpp"

using namespace vague;

TEST_CASE("empirical distribution function") {
  const auto F = ecdf(OrderedSample({3.0, 1.0, 2.0}));
  CHECK(F.jump_points() == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(F(1.0) == doctest::Approx(1.0 / 3));
  CHECK(F(2.0) == doctest::Approx(2.0 / 3));
  const auto G = ecdf(OrderedSample({1.0, 1.0, 2.0}));
  CHECK(G.jump_points() == std::vector<double>{1.0, 2.0});
  CHECK(G(1.0) == doctest::Approx(2.0 / 3));
  const auto H = ecdf(OrderedSample({4.0}));
  CHECK(H.size() == 1);
  CHECK(H(4.0) == 1.0);
  CHECK_THROWS_AS(ecdf(OrderedSample({})), DomainError);
}

TEST_CASE("Kolmogorov-Smirnov distance") {
  const Law g = Law::gaussian(0.0, 1.0);
  SUBCASE("degenerate samples") {
    const double c = 0.7;
    const double one[] = {c};
    const double F = cdf(g, c);
    CHECK(ks_distance(one, g) == doctest::Approx(std::max(F, 1.0 - F)).epsilon(1e-15));
    const double median[] = {0.0};
    CHECK(ks_distance(median, g) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("agrees with a two-sided scan") {
    RngStream rng(8, 0);
    for (int trial = 0; trial < 20; ++trial) {
      auto x = inverse_transform_draws(Distribution(g), rng, 200);
      const double ref = oracle::ks_scan(x, oracle::normal_cdf);
      std::sort(x.begin(), x.end());
      CHECK(ks_distance(x, g) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
  SUBCASE("large sample from the law itself") {
    RngStream rng(42, 0);
    CHECK(ks_distance(inverse_transform_sample(Distribution(g), rng, 100000), g) <= 0.01);
  }
  SUBCASE("invariant under the probability integral transform") {
    RngStream rng(4, 0);
    const auto s = inverse_transform_sample(Distribution(Law::exponential1()), rng, 5000);
    std::vector<double> u;
    for (double v : s.values()) u.push_back(cdf(Law::exponential1(), v));
    CHECK(ks_distance(u, Law::uniform01()) ==
          doctest::Approx(ks_distance(s, Law::exponential1())).epsilon(1e-12));
  }
  const double pts[] = {0.0, 1.0};
  CHECK_THROWS_AS(ks_distance(pts, Law::poisson(1.0)), ContinuityRequired);
  const double unsorted[] = {1.0, 0.0};
  CHECK_THROWS_AS(ks_distance(unsorted, g), DomainError);
}

TEST_CASE("two-sample KS") {
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {1.0, 2.0, 3.0};
  CHECK(ks_two_sample(a, b) == 0.0);
  const double c[] = {4.0, 5.0};
  CHECK(ks_two_sample(a, c) == 1.0);
  const double d[] = {1.5, 2.5, 3.5};
  CHECK(ks_two_sample(a, d) == doctest::Approx(1.0 / 3));
}

TEST_CASE("total variation") {
  const DiscreteLawTable p{{0.0, 1.0}, {0.5, 0.5}, 0.0};
  const DiscreteLawTable q{{2.0, 3.0}, {0.25, 0.75}, 0.0};
  CHECK(tv_distance(p, p) == 0.0);
  CHECK(tv_distance(p, q) == 1.0);
  const double binpois = tv_distance(discrete_table(Law::binomial(1000, 0.001)),
                                     discrete_table(Law::poisson(1.0)));
  CHECK(binpois <= 0.01);
  const double ref = oracle::half_l1(oracle::binomial_pmf(1000, 0.001), oracle::poisson_pmf(1.0, 1000));
  CHECK(binpois == doctest::Approx(ref).epsilon(1e-9));
  CHECK_THROWS_AS(discrete_table(Law::gaussian(0.0, 1.0)), ContinuityRequired);
  CHECK_THROWS_AS((DiscreteLawTable{{0.0, 1.0}, {0.5, 0.6}, 0.0}.validate()), DomainError);
}

TEST_CASE("Scheffe identity against all events") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> size(1, 12);
  std::exponential_distribution<double> w(1.0);
  std::bernoulli_distribution hole(0.2);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = size(gen);
    std::vector<double> support(m), p(m), q(m);
    double sp = 0.0, sq = 0.0;
    for (int i = 0; i < m; ++i) {
      support[i] = i;
      p[i] = hole(gen) ? 0.0 : w(gen);
      q[i] = hole(gen) ? 0.0 : w(gen);
      sp += p[i];
      sq += q[i];
    }
    if (sp == 0.0) p[0] = sp = 1.0;
    if (sq == 0.0) q[m - 1] = sq = 1.0;
    for (int i = 0; i < m; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    const double tv = tv_distance({support, p, 0.0}, {support, q, 0.0});
    CHECK(std::abs(tv - oracle::tv_by_events(p, q)) <= 1e-12);
  }
}

TEST_CASE("empirical covariance") {
  SUBCASE("identical rows") {
    Eigen::MatrixXd rows = Eigen::MatrixXd::Ones(10, 3) * 2.5;
    CHECK(empirical_cov(rows).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("basis rows") {
    const int R = 10;
    Eigen::MatrixXd rows(R, 2);
    for (int r = 0; r < R; ++r) rows.row(r) << (r % 2 == 0), (r % 2 == 1);
    const auto c = empirical_cov(rows);
    const double v = 0.25 * R / (R - 1.0);
    CHECK(c(0, 0) == doctest::Approx(v));
    CHECK(c(0, 1) == doctest::Approx(-v));
    CHECK(c(1, 1) == doctest::Approx(v));
  }
  SUBCASE("one column, permutation and translation") {
    std::mt19937_64 gen(1);
    std::normal_distribution<double> z(0.0, 1.0);
    Eigen::MatrixXd rows(50, 3);
    std::vector<std::vector<double>> copy(50, std::vector<double>(3));
    for (int r = 0; r < 50; ++r) {
      for (int j = 0; j < 3; ++j) copy[r][j] = rows(r, j) = z(gen);
    }
    const auto c = empirical_cov(rows);
    const auto ref = oracle::covariance(copy);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) CHECK(c(i, j) == doctest::Approx(ref[i][j]).epsilon(1e-12));
    }
    CHECK(empirical_cov(rows.col(0)).size() == 1);
    CHECK(empirical_cov(rows.col(0))(0, 0) == doctest::Approx(ref[0][0]).epsilon(1e-12));
    Eigen::MatrixXd permuted = rows.colwise().reverse();
    CHECK((empirical_cov(permuted) - c).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::MatrixXd shifted = rows.rowwise() + Eigen::RowVector3d(5.0, -3.0, 100.0);
    CHECK((empirical_cov(shifted) - c).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(empirical_cov(Eigen::MatrixXd::Zero(1, 2)), DomainError);
}

TEST_CASE("empirical characteristic function") {
  const double x[] = {0.3, -1.2, 4.0};
  CHECK(empirical_cf(x, 0.0) == std::complex<double>(1.0, 0.0));
  const double zeros[] = {0.0, 0.0};
  CHECK(empirical_cf(zeros, 3.7) == std::complex<double>(1.0, 0.0));
  const auto v = empirical_cf(x, 0.5);
  std::complex<double> ref = 0.0;
  for (double xi : x) ref += std::exp(std::complex<double>(0.0, 0.5 * xi)) / 3.0;
  CHECK(std::abs(v - ref) < 1e-15);
}

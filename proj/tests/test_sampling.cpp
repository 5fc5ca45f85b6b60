#include <doctest.h>

#include <cmath>

#include "vague/errors.hpp"
#include "vague/metrics.hpp"
#include "vague/sampling.hpp"

using namespace vague;

TEST_CASE("inverse-transform samples") {
  SUBCASE("point mass") {
    RngStream rng(1, 0);
    const auto s = inverse_transform_sample(Distribution(StepCdf::point_mass(0.0)), rng, 50);
    for (double v : s.values()) CHECK(v == 0.0);
  }
  SUBCASE("uniform goodness of fit") {
    RngStream rng(42, 0);
    const auto s = inverse_transform_sample(Distribution(Law::uniform01()), rng, 100000);
    CHECK(ks_distance(s, Law::uniform01()) <= 0.01);
    CHECK(std::is_sorted(s.values().begin(), s.values().end()));
  }
  SUBCASE("binomial frequencies") {
    RngStream rng(42, 1);
    const auto draws = inverse_transform_draws(Distribution(Law::binomial(2, 0.5)), rng, 100000);
    double counts[3] = {0, 0, 0};
    for (double v : draws) counts[static_cast<int>(v)] += 1.0 / draws.size();
    CHECK(counts[0] == doctest::Approx(0.25).epsilon(0.02));
    CHECK(std::abs(counts[1] - 0.5) <= 0.005);
    CHECK(std::abs(counts[2] - 0.25) <= 0.005);
  }
  SUBCASE("determinism") {
    RngStream a(7, 3), b(7, 3);
    CHECK(inverse_transform_draws(Distribution(Law::gumbel()), a, 1000) ==
          inverse_transform_draws(Distribution(Law::gumbel()), b, 1000));
  }
  RngStream rng(1, 0);
  CHECK_THROWS_AS(inverse_transform_sample(Distribution(Law::uniform01()), rng, 0), DomainError);
}

TEST_CASE("ordered samples keep ties in draw order") {
  const OrderedSample s({3.0, 1.0, 2.0, 1.0}, {"test", 1, 2});
  CHECK(s.values() == std::vector<double>{1.0, 1.0, 2.0, 3.0});
  CHECK(s.provenance().law == "test");
  CHECK(s[3] == 3.0);
}

TEST_CASE("Renyi representation") {
  SUBCASE("n = 1") {
    RngStream rng(3, 0);
    const auto d = renyi_draw(rng, 1);
    REQUIRE(d.ratios.size() == 1);
    CHECK(d.ratios[0] > 0.0);
    CHECK(d.ratios[0] < 1.0);
  }
  SUBCASE("joint law at n = 2") {
    // P(U_{1,2} <= a, U_{2,2} <= b) = 2 * area{0 <= u1 <= u2 <= b, u1 <= a} = 2ab - a^2 for a <= b.
    const double a = 0.3, b = 0.7;
    const int reps = 100000;
    int hits = 0;
    for (int r = 0; r < reps; ++r) {
      RngStream rng = substream(11, r);
      const auto u = uniform_order_stats_renyi(rng, 2);
      hits += (u[0] <= a && u[1] <= b);
    }
    CHECK(std::abs(static_cast<double>(hits) / reps - (2 * a * b - a * a)) <= 0.01);
  }
  SUBCASE("ratios are independent of the total") {
    const int reps = 10000, n = 5;
    Eigen::MatrixXd rows(reps, n + 1);
    for (int r = 0; r < reps; ++r) {
      RngStream rng = substream(13, r);
      const auto d = renyi_draw(rng, n);
      for (int j = 0; j < n; ++j) rows(r, j) = d.ratios[j];
      rows(r, n) = d.total;
    }
    const Eigen::MatrixXd c = empirical_cov(rows);
    for (int j = 0; j < n; ++j) {
      CHECK(std::abs(c(j, n) / std::sqrt(c(j, j) * c(n, n))) <= 0.03);
    }
  }
}

TEST_CASE("spacings and Malmquist ratios") {
  const double one[] = {1.0 - std::exp(-1.0)};
  CHECK(exponential_spacings(one)[0] == doctest::Approx(1.0).epsilon(1e-14));
  const double inv_e[] = {std::exp(-1.0)};
  CHECK(malmquist_ratios(inv_e)[0] == doctest::Approx(1.0).epsilon(1e-14));
  const double unsorted[] = {0.5, 0.2};
  CHECK_THROWS_AS(exponential_spacings(unsorted), DomainError);
  const double outside[] = {0.5, 1.0};
  CHECK_THROWS_AS(malmquist_ratios(outside), DomainError);

  std::vector<double> spacings, ratios;
  for (int r = 0; r < 1000; ++r) {
    RngStream rng = substream(17, r);
    const auto u = uniform_order_stats_renyi(rng, 20);
    const auto e = exponential_spacings(u.view());
    const auto m = malmquist_ratios(u.view());
    spacings.insert(spacings.end(), e.begin(), e.end());
    ratios.insert(ratios.end(), m.begin(), m.end());
  }
  std::sort(spacings.begin(), spacings.end());
  std::sort(ratios.begin(), ratios.end());
  CHECK(ks_distance(spacings, Law::exponential1()) <= 0.02);
  CHECK(ks_distance(ratios, Law::exponential1()) <= 0.02);
}

TEST_CASE("Skorohod coupling") {
  SUBCASE("location family") {
    std::vector<Distribution> seq;
    for (int n : {1, 10, 100}) seq.emplace_back(Law::gaussian(1.0 / n, 1.0));
    const double u[] = {0.5};
    const auto t = skorohod_coupling(seq, Distribution(Law::gaussian(0.0, 1.0)), u);
    CHECK(t.gaps[0][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.gaps[0][1] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(t.gaps[0][2] == doctest::Approx(0.01).epsilon(1e-12));
  }
  SUBCASE("constant sequence") {
    std::vector<Distribution> seq(3, Distribution(Law::gumbel()));
    const double u[] = {0.1, 0.5, 0.9};
    const auto t = skorohod_coupling(seq, Distribution(Law::gumbel()), u);
    for (const auto& row : t.gaps) {
      for (double g : row) CHECK(g == 0.0);
    }
  }
  SUBCASE("binomial to Poisson") {
    std::vector<Distribution> seq;
    for (int n : {10, 100, 1000}) seq.emplace_back(Law::binomial(n, 1.0 / n));
    const double u[] = {0.3};
    const auto t = skorohod_coupling(seq, Distribution(Law::poisson(1.0)), u);
    CHECK(t.gaps[0].back() == 0.0);
    CHECK(t.gaps[0][0] >= t.gaps[0][2]);
  }
}

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "vague/errors.hpp"
#include "vague/law.hpp"
#include "vague/quantile.hpp"

using namespace vague;

namespace {

StepCdf half_half() { return StepCdf({0.0, 1.0}, {0.5, 1.0}); }

StepCdf to_cdf(const oracle::RandomStep& s) { return StepCdf(s.points, s.levels); }

}  // namespace

TEST_CASE("step cdf evaluation") {
  const auto F = half_half();
  CHECK(F(-0.1) == 0.0);
  CHECK(F(0.0) == 0.5);
  CHECK(F(0.999) == 0.5);
  CHECK(F(1.0) == 1.0);
  CHECK(step_cdf_eval(F, 5.0) == 1.0);
}

TEST_CASE("generalized inverse on a two-point law") {
  const auto F = half_half();
  CHECK(generalized_inverse(F, 0.5) == 0.0);
  CHECK(generalized_inverse(F, 0.7) == 1.0);
  CHECK(generalized_inverse(F, 1.0) == 1.0);
  CHECK_THROWS_AS(generalized_inverse(F, 0.0), DomainError);
  CHECK_THROWS_AS(generalized_inverse(F, 1.5), DomainError);
}

TEST_CASE("left limits") {
  const auto F = half_half();
  CHECK(left_limit(F, 0.0) == 0.0);
  CHECK(left_limit(F, 1.0) == 0.5);
  CHECK(left_limit(F, 0.5) == 0.5);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(StepCdf({1.0, 0.0}, {0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(StepCdf({0.0, 1.0}, {0.6, 0.5}), DomainError);
  CHECK_THROWS_AS(StepCdf({0.0, 1.0}, {0.5, 0.9}), DomainError);
  CHECK_THROWS_AS(StepCdf({}, {}), DomainError);
  const double masses[] = {0.25, 0.0, 0.75};
  const double support[] = {-1.0, 0.0, 2.0};
  const auto F = StepCdf::from_masses(support, masses);
  CHECK(F.size() == 2);
  CHECK(F(0.0) == 0.25);
}

TEST_CASE("generalized inverse agrees with a linear scan") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = oracle::random_step(gen, 20);
    const auto F = to_cdf(s);
    for (int k = 0; k < 10; ++k) {
      const double u = 1.0 - unif(gen);
      CHECK(generalized_inverse(F, u) == oracle::inverse_scan(s.points, s.levels, u));
    }
    for (double level : s.levels) {
      CHECK(generalized_inverse(F, level) == oracle::inverse_scan(s.points, s.levels, level));
    }
  }
}

TEST_CASE("Galois relation and inverse properties on random step functions") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> grid(-60, 60);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = oracle::random_step(gen, 12);
    const auto F = to_cdf(s);
    for (int k = 0; k < 5; ++k) {
      // Levels are hit exactly half the time; that is where the relation is delicate.
      const double u = (k % 2 == 0) ? s.levels[gen() % s.levels.size()] : 1.0 - unif(gen);
      const double t = (k % 3 == 0) ? s.points[gen() % s.points.size()] : grid(gen) * 0.125;
      const double q = generalized_inverse(F, u);
      REQUIRE((q <= t) == (u <= F(t)));
      CHECK(F(q) >= u);
      if (F(t) > 0.0) CHECK(generalized_inverse(F, F(t)) <= t);
      CHECK(left_limit(F, q) <= u);
      const double u2 = 1.0 - unif(gen);
      if (u <= u2) CHECK(q <= generalized_inverse(F, u2));
    }
  }
}

TEST_CASE("generalized inverse is left-continuous") {
  const auto F = StepCdf({-1.0, 0.0, 3.0}, {0.2, 0.7, 1.0});
  for (double u : {0.2, 0.7, 1.0, 0.45}) {
    const double target = generalized_inverse(F, u);
    for (double h = 0.1; h > 1e-12; h /= 10.0) {
      if (u - h <= 0.0) continue;
      const double from_left = generalized_inverse(F, u - h);
      CHECK(from_left <= target);
      if (h < 1e-3) CHECK(from_left == target);
    }
  }
}

TEST_CASE("epsilon partition") {
  SUBCASE("uniform breakpoints") {
    const auto t = epsilon_partition(Law::uniform01(), 0.25);
    REQUIRE(t.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(t[i] == doctest::Approx(0.25 * i).epsilon(1e-15));
  }
  SUBCASE("point mass") {
    const auto F = StepCdf::point_mass(0.0);
    const auto t = epsilon_partition(F, 0.1);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      CHECK(left_limit(F, t[i + 1]) - F(t[i]) == 0.0);
    }
  }
  SUBCASE("exponential intervals carry at most eps") {
    const auto t = epsilon_partition(Law::exponential1(), 0.5);
    CHECK(t.front() == 0.0);
    CHECK(std::isinf(t.back()));
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      CHECK(left_limit(Law::exponential1(), t[i + 1]) - cdf(Law::exponential1(), t[i]) <= 0.5 + 1e-15);
    }
  }
  SUBCASE("random step functions") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 500; ++trial) {
      const auto F = to_cdf(oracle::random_step(gen, 15));
      const double eps = 0.05 + 0.9 * std::uniform_real_distribution<double>(0.0, 1.0)(gen);
      const auto t = epsilon_partition(F, eps);
      CHECK(std::is_sorted(t.begin(), t.end()));
      for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        CHECK(t[i] < t[i + 1]);
        CHECK(left_limit(F, t[i + 1]) - F(t[i]) <= eps + 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(epsilon_partition(half_half(), 0.0), DomainError);
  CHECK_THROWS_AS(epsilon_partition(half_half(), 1.5), DomainError);
}

TEST_CASE("inverses of converging Gaussian laws converge") {
  double previous = std::numeric_limits<double>::infinity();
  for (int n : {1, 10, 100}) {
    double gap = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double u = k / 100.0;
      gap = std::max(gap, std::abs(quantile(Law::gaussian(1.0 / n, 1.0), u) -
                                   quantile(Law::gaussian(0.0, 1.0), u)));
    }
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous == doctest::Approx(0.01).epsilon(1e-9));
}

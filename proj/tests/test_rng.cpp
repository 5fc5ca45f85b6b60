#include <doctest.h>

#include <cmath>
#include <set>

#include "vague/rng.hpp"

using namespace vague;

TEST_CASE("philox known answers") {
  // Published Philox4x32-10 test vectors.
  using Block = std::array<std::uint32_t, 4>;
  CHECK(RngStream::philox({0, 0, 0, 0}, {0, 0}) ==
        Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(RngStream::philox({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu}) ==
        Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(RngStream::philox({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u}) ==
        Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are deterministic and distinct") {
  RngStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  const double first_c = c.uniform();
  const double first_d = d.uniform();
  const double first_a = a.uniform();
  CHECK(first_a == b.uniform());
  for (int i = 1; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  CHECK(first_a != first_c);
  CHECK(first_a != first_d);
  RngStream e = substream(42, 7);
  RngStream f(42, 7);
  CHECK(e.next_u64() == f.next_u64());
  CHECK(e.master_seed() == 42);
  CHECK(e.stream_index() == 7);
}

TEST_CASE("uniforms live in the open unit interval") {
  RngStream rng(1, 2);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal and exponential moments") {
  RngStream rng(9, 0);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0, e1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    e1 += rng.exponential();
  }
  CHECK(std::abs(s1 / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(e1 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("substreams do not overlap") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 64; ++s) {
    RngStream rng = substream(5, s);
    for (int i = 0; i < 64; ++i) CHECK(seen.insert(rng.next_u64()).second);
  }
}

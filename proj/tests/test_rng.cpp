#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "lingstat/rng.hpp"

using namespace lingstat;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Random123 kat_vectors.
  auto a = rng::philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(a == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  auto b = rng::philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(b == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  auto c = rng::philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(c == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are addressed by (key, replicate)") {
  rng::Stream s1(42, 7), s2(42, 7), s3(42, 8), s4(43, 7);
  std::vector<std::uint32_t> a, b, c, d;
  for (int i = 0; i < 16; ++i) {
    a.push_back(s1());
    b.push_back(s2());
    c.push_back(s3());
    d.push_back(s4());
  }
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a != d);
}

TEST_CASE("derive_key separates stages") {
  CHECK(rng::derive_key(1, "a") != rng::derive_key(1, "b"));
  CHECK(rng::derive_key(1, "a") != rng::derive_key(2, "a"));
  CHECK(rng::derive_key(1, "a") == rng::derive_key(1, "a"));
}

TEST_CASE("below() stays in range and covers it") {
  rng::Stream s(5, 0);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = s.below(7);
    REQUIRE(v < 7);
    counts[v]++;
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);  // ~5 SD
}

TEST_CASE("uniform() lies in [0,1)") {
  rng::Stream s(9, 3);
  double lo = 1, hi = 0, sum = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = s.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("shuffle yields a permutation") {
  rng::Stream s(11, 0);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng::shuffle(std::span<int>(v), s);
  std::set<int> seen(v.begin(), v.end());
  CHECK(seen.size() == 50);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 49);
}

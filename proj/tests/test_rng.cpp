#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hyperspec/rng.hpp"

using namespace hyperspec;

TEST_CASE("Philox4x64-10 known-answer vectors") {
  using A4 = std::array<std::uint64_t, 4>;
  CHECK(RngStream::philox({0, 0, 0, 0}, {0, 0}) ==
        A4{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL});
  const std::uint64_t f = ~0ULL;
  CHECK(RngStream::philox({f, f, f, f}, {f, f}) ==
        A4{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL, 0x9cc7d7c69cd777b6ULL, 0xa09caebf594f0ba0ULL});
  CHECK(RngStream::philox({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL},
                          {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL}) ==
        A4{0xa528f45403e61d95ULL, 0x38c72dbd566e9788ULL, 0xa5a1610e72fd18b5ULL, 0x57bd43b5e52b7fe6ULL});
}

TEST_CASE("stream words are the Philox blocks in order") {
  RngStream s(11, 3);
  const auto b0 = RngStream::philox({0, 0, 0, 0}, {11, 3});
  const auto b1 = RngStream::philox({1, 0, 0, 0}, {11, 3});
  for (int i = 0; i < 4; ++i) CHECK(s.next_u64() == b0[static_cast<std::size_t>(i)]);
  for (int i = 0; i < 4; ++i) CHECK(s.next_u64() == b1[static_cast<std::size_t>(i)]);
}

TEST_CASE("identical keys reproduce, distinct streams differ") {
  RngStream a(7, 0), b(7, 0), c(7, 1), d(8, 0);
  int same_c = 0, same_d = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    same_c += x == c.next_u64();
    same_d += x == d.next_u64();
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
}

TEST_CASE("variate moments") {
  RngStream s(1, 0);
  const int n = 200000;
  double su = 0.0, su2 = 0.0, sn = 0.0, sn2 = 0.0, sc2 = 0.0, sp = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    su2 += u * u;
    const double z = s.normal();
    sn += z;
    sn2 += z * z;
    sc2 += std::norm(s.complex_normal());
  }
  for (int i = 0; i < 20000; ++i) sp += static_cast<double>(s.poisson(37.5));
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.005));
  CHECK(su2 / n - (su / n) * (su / n) == doctest::Approx(1.0 / 12.0).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sc2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sp / 20000 == doctest::Approx(37.5).epsilon(0.005));
}

TEST_CASE("uniform_open never returns the endpoints") {
  RngStream s(2, 5);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

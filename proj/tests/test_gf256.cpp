#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "dgrid/error.hpp"
#include "dgrid/gf256.hpp"
#include "dgrid/linalg.hpp"
#include "oracles.hpp"

using dgrid::Gf256;

TEST_CASE("gf_mul examples") {
  CHECK(dgrid::gf_mul(Gf256(0x57), Gf256(0x01)) == Gf256(0x57));
  CHECK(dgrid::gf_mul(Gf256(0x00), Gf256(0xab)) == Gf256(0x00));
  CHECK(dgrid::gf_mul(Gf256(0x02), Gf256(0x80)) == Gf256(0x1b));
  CHECK(dgrid::gf_mul(Gf256(0x57), Gf256(0x83)) == Gf256(0xc1));
}

TEST_CASE("gf_mul is bit-identical to the schoolbook product on all pairs") {
  for (int a = 0; a < 256; ++a)
    for (int b = 0; b < 256; ++b)
      REQUIRE(dgrid::gf_mul(Gf256(a), Gf256(b)).value ==
              oracle::gf_mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)));
}

TEST_CASE("field axioms") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int t = 0; t < 20000; ++t) {
    const Gf256 a(byte(rng)), b(byte(rng)), c(byte(rng));
    REQUIRE(a * b == b * a);
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a + a == Gf256(0));
  }
}

TEST_CASE("gf_inv") {
  CHECK(dgrid::gf_inv(Gf256(0x01)) == Gf256(0x01));
  CHECK(dgrid::gf_inv(Gf256(0x02)) == Gf256(0x8d));
  CHECK_THROWS_AS(dgrid::gf_inv(Gf256(0x00)), dgrid::DomainError);

  for (int a = 1; a < 256; ++a) {
    const Gf256 inv = dgrid::gf_inv(Gf256(a));
    REQUIRE(inv.value == oracle::gf_inv(static_cast<std::uint8_t>(a)));
    REQUIRE(dgrid::gf_mul(Gf256(a), inv) == Gf256(1));
  }
}

TEST_CASE("nonzero elements form a cyclic group of order 255") {
  // 0x03 generates: its powers visit every nonzero element once.
  std::vector<bool> seen(256, false);
  Gf256 x(1);
  for (int i = 0; i < 255; ++i) {
    REQUIRE_FALSE(seen[x.value]);
    seen[x.value] = true;
    x = x * Gf256(3);
  }
  CHECK(x == Gf256(1));
}

TEST_CASE("poly_eval") {
  const std::vector<Gf256> constant{Gf256(0x2a)};
  CHECK(dgrid::poly_eval(constant, Gf256(0x07)) == Gf256(0x2a));
  const std::vector<Gf256> flat{Gf256(0x05), Gf256(0x00)};
  CHECK(dgrid::poly_eval(flat, Gf256(0x09)) == Gf256(0x05));
  const std::vector<Gf256> line{Gf256(0x01), Gf256(0x01)};
  CHECK(dgrid::poly_eval(line, Gf256(0x02)) == Gf256(0x03));
  CHECK_THROWS_AS(dgrid::poly_eval(std::vector<Gf256>{}, Gf256(1)), dgrid::DomainError);

  std::mt19937 rng(11);
  std::uniform_int_distribution<int> byte(0, 255), degree(0, 9);
  for (int t = 0; t < 2000; ++t) {
    std::vector<Gf256> coeffs(static_cast<std::size_t>(degree(rng) + 1));
    for (auto& c : coeffs) c = Gf256(byte(rng));
    const auto x = static_cast<std::uint8_t>(byte(rng));
    std::uint8_t naive = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      naive ^= oracle::gf_mul(coeffs[i].value, oracle::gf_pow(x, static_cast<int>(i)));
    REQUIRE(dgrid::poly_eval(coeffs, Gf256(x)).value == naive);
  }
}

TEST_CASE("field_inverse over GF(256) and over doubles") {
  dgrid::GfMatrix m(2, 2);
  m << Gf256(1), Gf256(0), Gf256(0x8d), Gf256(0xf6);
  const auto inv = dgrid::field_inverse(m);
  REQUIRE(inv);
  const dgrid::GfMatrix id = m * *inv;
  CHECK(id == dgrid::GfMatrix::Identity(2, 2));

  dgrid::GfMatrix singular(2, 2);
  singular << Gf256(1), Gf256(2), Gf256(2), Gf256(4);  // row 2 = 2 * row 1
  CHECK_FALSE(dgrid::field_inverse(singular));

  Eigen::Matrix2d d;
  d << 0.0, 2.0, 4.0, 0.0;
  const auto dinv = dgrid::field_inverse(d);
  REQUIRE(dinv);
  CHECK((d * *dinv - Eigen::Matrix2d::Identity()).norm() < 1e-15);
}

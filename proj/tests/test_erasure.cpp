#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "dgrid/erasure.hpp"
#include "dgrid/error.hpp"
#include "dgrid/share_format.hpp"
#include "oracles.hpp"

using namespace dgrid;

namespace {

Bytes random_bytes(std::mt19937& rng, std::size_t len) {
  std::uniform_int_distribution<int> byte(0, 255);
  Bytes out(len);
  for (auto& b : out) b = static_cast<std::uint8_t>(byte(rng));
  return out;
}

std::vector<Share> pick(const std::vector<Share>& shares, const std::vector<int>& idx) {
  std::vector<Share> out;
  for (int i : idx) out.push_back(shares[static_cast<std::size_t>(i)]);
  return out;
}

bool contains_run(const Bytes& hay, const Bytes& needle, std::size_t offset, std::size_t len) {
  auto first = needle.begin() + static_cast<std::ptrdiff_t>(offset);
  return std::search(hay.begin(), hay.end(), first, first + static_cast<std::ptrdiff_t>(len)) != hay.end();
}

}  // namespace

TEST_CASE("build_matrix") {
  SUBCASE("k = n is the identity") {
    const GfMatrix m = build_matrix(3, 3);
    CHECK(m == GfMatrix::Identity(3, 3));
  }
  SUBCASE("(2, 3) parity row") {
    const GfMatrix m = build_matrix(2, 3);
    CHECK(m(2, 0) == Gf256(oracle::gf_inv(2 ^ 0)));
    CHECK(m(2, 1) == Gf256(oracle::gf_inv(2 ^ 1)));
    CHECK(m(2, 0) == Gf256(0x8d));
    CHECK(m(2, 1) == Gf256(0xf6));
  }
  SUBCASE("(4, 5) parity row") {
    const GfMatrix m = build_matrix(4, 5);
    const int expect[] = {0xcb, 0x52, 0x7b, 0xd1};
    for (int j = 0; j < 4; ++j) CHECK(m(4, j) == Gf256(expect[j]));
  }
  SUBCASE("parameter errors") {
    CHECK_THROWS_AS(build_matrix(3, 2), ParameterError);
    CHECK_THROWS_AS(build_matrix(0, 2), ParameterError);
    CHECK_THROWS_AS(build_matrix(2, 256), ParameterError);
  }
}

TEST_CASE("every k-row submatrix has nonzero determinant") {
  for (int k = 1; k <= 4; ++k) {
    for (int n = k; n <= 7; ++n) {
      const GfMatrix m = build_matrix(k, n);
      for (const auto& rows : oracle::subsets(n, k)) {
        std::vector<std::vector<std::uint8_t>> sub;
        for (int r : rows) {
          std::vector<std::uint8_t> row;
          for (int c = 0; c < k; ++c) row.push_back(m(r, c).value);
          sub.push_back(row);
        }
        REQUIRE(oracle::gf_det(sub) != 0);
      }
    }
  }
}

TEST_CASE("encode") {
  SUBCASE("zero data gives zero payloads") {
    const auto shares = encode(Bytes(10, 0), {3, 5});
    for (const auto& s : shares) CHECK(std::all_of(s.payload.begin(), s.payload.end(), [](auto b) { return b == 0; }));
  }
  SUBCASE("parity byte for (2, 3)") {
    const Bytes data{0x10, 0x22, 0x37, 0xff};  // stripes {10 22} {37 ff}
    const auto shares = encode(data, {2, 3});
    REQUIRE(shares.size() == 3);
    CHECK(shares[0].payload == Bytes{0x10, 0x22});
    CHECK(shares[1].payload == Bytes{0x37, 0xff});
    for (std::size_t j = 0; j < 2; ++j) {
      const std::uint8_t expect = oracle::gf_mul(0x8d, shares[0].payload[j]) ^ oracle::gf_mul(0xf6, shares[1].payload[j]);
      CHECK(shares[2].payload[j] == expect);
    }
  }
  SUBCASE("k = n gives the stripes, zero-padded") {
    const Bytes data{1, 2, 3, 4, 5, 6, 7};
    const auto shares = encode(data, {3, 3});
    CHECK(shares[0].payload == Bytes{1, 2, 3});
    CHECK(shares[1].payload == Bytes{4, 5, 6});
    CHECK(shares[2].payload == Bytes{7, 0, 0});
    for (const auto& s : shares) {
      CHECK(s.original_length == 7);
      CHECK(s.scheme == Scheme::rs_systematic);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(encode(Bytes{}, {2, 3}), DomainError);
    CHECK_THROWS_AS(encode(Bytes{1}, {3, 2}), ParameterError);
  }
}

TEST_CASE("decode") {
  std::mt19937 rng(3);
  const Bytes data = random_bytes(rng, 101);
  const auto shares = encode(data, {2, 4});
  CHECK(decode(pick(shares, {0, 1})) == data);
  for (const auto& subset : oracle::subsets(4, 2)) CHECK(decode(pick(shares, subset)) == data);
  CHECK_THROWS_AS(decode(pick(shares, {3})), InsufficientSharesError);
  CHECK_THROWS_AS(decode(pick(shares, {1, 1})), InconsistencyError);

  const auto other = encode(random_bytes(rng, 101), {2, 4});
  CHECK_THROWS_AS(decode(std::vector<Share>{shares[0], other[1]}), InconsistencyError);

  auto short_payload = shares[2];
  short_payload.payload.pop_back();
  CHECK_THROWS(decode(std::vector<Share>{shares[0], short_payload}));

  auto corrupted = shares[3];
  corrupted.payload[5] ^= 0x40;
  CHECK_THROWS_AS(decode(std::vector<Share>{shares[0], corrupted}), IntegrityError);
}

TEST_CASE("randomized MDS round trip") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::size_t> len(1, 300);
  for (int k = 1; k <= 4; ++k) {
    for (int n = k; n <= 7; ++n) {
      const Bytes data = random_bytes(rng, len(rng));
      const auto shares = encode(data, {k, n});
      for (const auto& subset : oracle::subsets(n, k)) REQUIRE(decode(pick(shares, subset)) == data);
    }
  }
}

TEST_CASE("storage is n * ceil(len / k)") {
  const auto shares = encode(Bytes(10240, 0x5a), {4, 6});
  std::size_t total = 0;
  for (const auto& s : shares) total += s.payload.size();
  CHECK(total == 15360);
  CHECK(total < 6 * 10240);
}

TEST_CASE("sealed round trip and determinism") {
  std::mt19937 rng(29);
  const Bytes data = random_bytes(rng, 500);
  const auto shares = sealed_encode(data, {3, 5}, 11);
  CHECK(shares == sealed_encode(data, {3, 5}, 11));
  CHECK(shares != sealed_encode(data, {3, 5}, 12));
  for (const auto& s : shares) {
    CHECK(s.scheme == Scheme::rs_sealed);
    CHECK(s.key_share.size() == kSealedKeyBytes);
    CHECK(s.object_id == object_id_of(data));
  }
  for (const auto& subset : oracle::subsets(5, 3)) CHECK(sealed_decode(pick(shares, subset)) == data);
  CHECK_THROWS_AS(sealed_decode(pick(shares, {0, 4})), InsufficientSharesError);

  const auto other = sealed_encode(random_bytes(rng, 500), {3, 5}, 11);
  CHECK_THROWS_AS(sealed_decode(std::vector<Share>{shares[0], shares[1], other[2]}), InconsistencyError);
}

TEST_CASE("sealed shares carry neither the key nor plaintext runs") {
  // Recompute the key the same way the encoder draws it: the first 16 bytes
  // of the seeded stream.
  std::mt19937 rng(31);
  const Bytes data = random_bytes(rng, 4096);
  const std::uint64_t seed = 2024;
  ChaChaStream keys(seed);
  Bytes key(kSealedKeyBytes);
  keys.fill(key);

  const auto shares = sealed_encode(data, {2, 4}, seed);
  CHECK(seal_cipher(key, seal_cipher(key, data)) == data);
  CHECK(sealed_decode(pick(shares, {2, 3})) == data);
  for (const auto& s : shares) {
    const Bytes file = write_share(s);
    CHECK_FALSE(contains_run(file, key, 0, kSealedKeyBytes));
    for (std::size_t off = 0; off + 16 <= data.size(); off += 7) REQUIRE_FALSE(contains_run(file, data, off, 16));
  }
  // The decoder's key is consistent with the one derived above: decrypting
  // the systematic stripes by hand gives the plaintext prefix.
  Bytes stripes;
  for (int i = 0; i < 2; ++i)
    stripes.insert(stripes.end(), shares[static_cast<std::size_t>(i)].payload.begin(),
                   shares[static_cast<std::size_t>(i)].payload.end());
  stripes.resize(data.size());
  CHECK(seal_cipher(key, stripes) == data);
}

TEST_CASE("fewer than k key shares: count check") {
  const auto shares = sealed_encode(Bytes(64, 1), {3, 5}, 1);
  for (const auto& subset : oracle::subsets(5, 2)) {
    std::size_t key_shares = 0;
    for (int i : subset) key_shares += shares[static_cast<std::size_t>(i)].key_share.empty() ? 0 : 1;
    CHECK(key_shares < 3);
  }
}

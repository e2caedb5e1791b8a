#include "dgrid/gf256.hpp"

#include "dgrid/error.hpp"

namespace dgrid {
namespace {

constexpr std::uint8_t slow_mul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t p = 0;
  while (b) {
    if (b & 1) p ^= a;
    const bool carry = a & 0x80;
    a = static_cast<std::uint8_t>(a << 1);
    if (carry) a ^= 0x1b;
    b >>= 1;
  }
  return p;
}

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

// 0x03 generates the multiplicative group for 0x11b (0x02 does not).
constexpr Tables make_tables() {
  Tables t;
  std::uint8_t x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[i] = x;
    t.exp[i + 255] = x;
    t.log[x] = static_cast<std::uint8_t>(i);
    x = slow_mul(x, 0x03);
  }
  t.exp[510] = t.exp[0];
  t.exp[511] = t.exp[1];
  return t;
}

constexpr Tables kTables = make_tables();

static_assert(slow_mul(0x57, 0x83) == 0xc1);
static_assert(kTables.exp[255] == 1);

}  // namespace

Gf256 gf_mul(Gf256 a, Gf256 b) {
  if (a.value == 0 || b.value == 0) return Gf256{};
  return Gf256(kTables.exp[kTables.log[a.value] + kTables.log[b.value]]);
}

Gf256 gf_inv(Gf256 a) {
  if (a.value == 0) throw DomainError("zero has no multiplicative inverse in GF(256)");
  return Gf256(kTables.exp[255 - kTables.log[a.value]]);
}

Gf256 poly_eval(std::span<const Gf256> coeffs, Gf256 x) {
  if (coeffs.empty()) throw DomainError("polynomial has no coefficients");
  Gf256 acc = coeffs.back();
  for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace dgrid

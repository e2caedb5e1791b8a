#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <span>

#include <Eigen/Core>

namespace dgrid {

/// Element of GF(2^8) with reduction polynomial x^8+x^4+x^3+x+1 (0x11b).
///
/// Usable as an Eigen scalar: `Eigen::Matrix<Gf256, ...>` products evaluate
/// with field addition (xor) and field multiplication.
struct Gf256 {
  std::uint8_t value = 0;

  constexpr Gf256() = default;
  constexpr explicit Gf256(int v) : value(static_cast<std::uint8_t>(v)) {}

  friend constexpr bool operator==(Gf256 a, Gf256 b) { return a.value == b.value; }
  friend constexpr bool operator!=(Gf256 a, Gf256 b) { return a.value != b.value; }

  friend constexpr Gf256 operator+(Gf256 a, Gf256 b) { return Gf256(a.value ^ b.value); }
  friend constexpr Gf256 operator-(Gf256 a, Gf256 b) { return Gf256(a.value ^ b.value); }
  constexpr Gf256 operator-() const { return *this; }
  friend Gf256 operator*(Gf256 a, Gf256 b);
  friend Gf256 operator/(Gf256 a, Gf256 b);

  constexpr Gf256& operator+=(Gf256 o) {
    value ^= o.value;
    return *this;
  }
  constexpr Gf256& operator-=(Gf256 o) {
    value ^= o.value;
    return *this;
  }
  Gf256& operator*=(Gf256 o) { return *this = *this * o; }
  Gf256& operator/=(Gf256 o) { return *this = *this / o; }
};

using GfMatrix = Eigen::Matrix<Gf256, Eigen::Dynamic, Eigen::Dynamic>;
using GfRowMatrix = Eigen::Matrix<Gf256, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using GfVector = Eigen::Matrix<Gf256, Eigen::Dynamic, 1>;

Gf256 gf_mul(Gf256 a, Gf256 b);

/// Multiplicative inverse. Throws DomainError for zero.
Gf256 gf_inv(Gf256 a);

/// Horner evaluation of sum(coeffs[i] * x^i), constant term first.
/// Throws DomainError on an empty coefficient sequence.
Gf256 poly_eval(std::span<const Gf256> coeffs, Gf256 x);

inline Gf256 operator*(Gf256 a, Gf256 b) { return gf_mul(a, b); }
inline Gf256 operator/(Gf256 a, Gf256 b) { return gf_mul(a, gf_inv(b)); }

/// Prints the value in decimal, as Eigen's matrix printer expects.
inline std::ostream& operator<<(std::ostream& os, Gf256 a) { return os << static_cast<int>(a.value); }

}  // namespace dgrid

namespace Eigen {

template <>
struct NumTraits<dgrid::Gf256> : GenericNumTraits<dgrid::Gf256> {
  using Real = dgrid::Gf256;
  using NonInteger = dgrid::Gf256;
  using Literal = dgrid::Gf256;
  using Nested = dgrid::Gf256;

  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 0,
    RequireInitialization = 0,
    ReadCost = 1,
    AddCost = 1,
    MulCost = 3
  };
};

}  // namespace Eigen

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dgrid/gf256.hpp"
#include "dgrid/random.hpp"
#include "dgrid/share.hpp"

namespace dgrid {

/// Byte-wise Shamir (k, n) sharing over GF(256) with evaluation points 1..n.
///
/// Each byte position j gets its own polynomial whose constant term is
/// secret[j] and whose k-1 higher coefficients come from `next_coefficient`
/// (drawn position by position, low degree first). Share payloads are the
/// product of the n x k Vandermonde matrix with the k x len coefficient
/// matrix.
template <typename CoefficientSource>
std::vector<Share> split_with(ByteView secret, ShareParams params,
                              CoefficientSource&& next_coefficient);

/// Seeded split; identical (secret, params, seed) give identical shares.
std::vector<Share> split(ByteView secret, ShareParams params, std::uint64_t seed);
std::vector<Share> split(ByteView secret, ShareParams params, ChaChaStream& rng);

/// Lagrange interpolation at x = 0 from any k distinct shares of one family.
Bytes reconstruct(std::span<const Share> shares);

/// n x k matrix with row i = [1, x, x^2, ...] for x = i + 1.
GfMatrix vandermonde(int n, int k);

/// Weights w with f(0) = sum w_i f(x_i) for any polynomial of degree < |xs|.
GfVector lagrange_weights_at_zero(std::span<const int> xs);

namespace detail {
std::vector<Share> shares_from_coefficients(ByteView secret, ShareParams params,
                                            const GfMatrix& coefficients);
void check_split_args(ByteView secret, ShareParams params);
/// Interpolates the first k shares of an index-sorted family, no digest check.
Bytes interpolate_at_zero(const std::vector<const Share*>& family, int k);
}  // namespace detail

template <typename CoefficientSource>
std::vector<Share> split_with(ByteView secret, ShareParams params,
                              CoefficientSource&& next_coefficient) {
  detail::check_split_args(secret, params);
  const auto len = static_cast<Eigen::Index>(secret.size());
  GfMatrix coefficients(params.k, len);
  for (Eigen::Index j = 0; j < len; ++j) {
    coefficients(0, j) = Gf256(secret[static_cast<std::size_t>(j)]);
    for (int d = 1; d < params.k; ++d)
      coefficients(d, j) = Gf256(static_cast<std::uint8_t>(next_coefficient()));
  }
  return detail::shares_from_coefficients(secret, params, coefficients);
}

}  // namespace dgrid

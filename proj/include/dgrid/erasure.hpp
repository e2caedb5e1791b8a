#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dgrid/gf256.hpp"
#include "dgrid/random.hpp"
#include "dgrid/share.hpp"

namespace dgrid {

/// Systematic (k, n) MDS generator: identity on top, Cauchy parity below
/// with row i, column j = 1 / ((k + i) xor j).
GfMatrix build_matrix(int k, int n);

/// Stripes `data` into k zero-padded rows of ceil(len / k) bytes and applies
/// the generator. Shares 1..k carry the raw stripes.
std::vector<Share> encode(ByteView data, ShareParams params);

/// Recovers the object from any k distinct shares of an encode() family.
Bytes decode(std::span<const Share> shares);

/// Encrypt-then-code: a 16-byte key from the seeded stream encrypts `data`
/// with ChaCha20, the ciphertext is encoded as in encode(), and the key is
/// Shamir-split with the same (k, n) into each share's key_share field.
std::vector<Share> sealed_encode(ByteView data, ShareParams params, std::uint64_t seed);
std::vector<Share> sealed_encode(ByteView data, ShareParams params, ChaChaStream& rng);

Bytes sealed_decode(std::span<const Share> shares);

constexpr std::size_t kSealedKeyBytes = 16;

/// ChaCha20 keystream xor under BLAKE2b-256(key16) with a zero nonce; its own
/// inverse. Each key encrypts exactly one object.
Bytes seal_cipher(ByteView key, ByteView data);

inline std::uint64_t stripe_length(std::uint64_t length, int k) {
  return (length + static_cast<std::uint64_t>(k) - 1) / static_cast<std::uint64_t>(k);
}

}  // namespace dgrid

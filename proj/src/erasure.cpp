#include "dgrid/erasure.hpp"

#include <array>

#include <sodium.h>

#include "dgrid/error.hpp"
#include "dgrid/linalg.hpp"
#include "dgrid/shamir.hpp"
#include "sodium_init.hpp"

namespace dgrid {
namespace {

std::vector<Share> code_payload(ByteView data, ShareParams params, Scheme scheme,
                                const ObjectId& id, std::uint64_t original_length) {
  const auto stripe = static_cast<Eigen::Index>(stripe_length(data.size(), params.k));
  GfMatrix stripes = GfMatrix::Zero(params.k, stripe);
  for (std::size_t b = 0; b < data.size(); ++b)
    stripes(static_cast<Eigen::Index>(b) / stripe, static_cast<Eigen::Index>(b) % stripe) =
        Gf256(data[b]);

  const GfRowMatrix coded = build_matrix(params.k, params.n) * stripes;

  std::vector<Share> shares(static_cast<std::size_t>(params.n));
  for (int i = 0; i < params.n; ++i) {
    Share& s = shares[static_cast<std::size_t>(i)];
    s.params = params;
    s.index = i + 1;
    s.scheme = scheme;
    s.object_id = id;
    s.original_length = original_length;
    s.payload.resize(static_cast<std::size_t>(stripe));
    for (Eigen::Index j = 0; j < stripe; ++j)
      s.payload[static_cast<std::size_t>(j)] = coded(i, j).value;
  }
  return shares;
}

// Returns the index-sorted family after checking headers and threshold.
std::vector<const Share*> checked_family(std::span<const Share> shares, Scheme scheme) {
  if (shares.empty()) throw InsufficientSharesError("no shares supplied");
  auto family = check_family(shares, scheme);
  const Share& first = *family.front();
  if (static_cast<int>(family.size()) < first.params.k)
    throw InsufficientSharesError("need " + std::to_string(first.params.k) + " shares, got " +
                                  std::to_string(family.size()));
  if (first.payload.size() != stripe_length(first.original_length, first.params.k))
    throw InconsistencyError("payload length does not match original length and k");
  return family;
}

Bytes decode_family(const std::vector<const Share*>& family) {
  const ShareParams params = family.front()->params;
  const auto stripe = static_cast<Eigen::Index>(family.front()->payload.size());

  std::vector<int> rows;
  GfMatrix received(params.k, stripe);
  for (int i = 0; i < params.k; ++i) {
    const Share& s = *family[static_cast<std::size_t>(i)];
    rows.push_back(s.index - 1);
    for (Eigen::Index j = 0; j < stripe; ++j)
      received(i, j) = Gf256(s.payload[static_cast<std::size_t>(j)]);
  }
  const auto inverse = field_inverse(select_rows(build_matrix(params.k, params.n), rows));
  if (!inverse) throw InconsistencyError("coding submatrix is singular");
  const GfRowMatrix stripes = *inverse * received;

  const std::uint64_t length = family.front()->original_length;
  Bytes out(length);
  for (std::uint64_t b = 0; b < length; ++b)
    out[b] = stripes(static_cast<Eigen::Index>(b) / stripe, static_cast<Eigen::Index>(b) % stripe)
                 .value;
  return out;
}

}  // namespace

GfMatrix build_matrix(int k, int n) {
  ShareParams{k, n}.validate();
  GfMatrix m = GfMatrix::Zero(n, k);
  for (int i = 0; i < k; ++i) m(i, i) = Gf256(1);
  for (int i = 0; i < n - k; ++i)
    for (int j = 0; j < k; ++j) m(k + i, j) = gf_inv(Gf256((k + i) ^ j));
  return m;
}

std::vector<Share> encode(ByteView data, ShareParams params) {
  params.validate();
  if (data.empty()) throw DomainError("cannot encode an empty object");
  return code_payload(data, params, Scheme::rs_systematic, object_id_of(data), data.size());
}

Bytes decode(std::span<const Share> shares) {
  const auto family = checked_family(shares, Scheme::rs_systematic);
  Bytes out = decode_family(family);
  verify_object_id(out, family.front()->object_id);
  return out;
}

Bytes seal_cipher(ByteView key, ByteView data) {
  if (key.size() != kSealedKeyBytes) throw DomainError("sealed key must be 16 bytes");
  ensure_sodium();
  std::array<std::uint8_t, crypto_stream_chacha20_ietf_KEYBYTES> stream_key{};
  crypto_generichash(stream_key.data(), stream_key.size(), key.data(), key.size(), nullptr, 0);
  const std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
  Bytes out(data.size());
  crypto_stream_chacha20_ietf_xor(out.data(), data.data(), data.size(), nonce.data(),
                                  stream_key.data());
  sodium_memzero(stream_key.data(), stream_key.size());
  return out;
}

std::vector<Share> sealed_encode(ByteView data, ShareParams params, ChaChaStream& rng) {
  params.validate();
  if (data.empty()) throw DomainError("cannot encode an empty object");

  std::array<std::uint8_t, kSealedKeyBytes> key{};
  rng.fill(key);
  const Bytes ciphertext = seal_cipher(key, data);
  auto shares = code_payload(ciphertext, params, Scheme::rs_sealed, object_id_of(data), data.size());
  auto key_shares = split(key, params, rng);
  for (std::size_t i = 0; i < shares.size(); ++i) shares[i].key_share = std::move(key_shares[i].payload);
  sodium_memzero(key.data(), key.size());
  return shares;
}

std::vector<Share> sealed_encode(ByteView data, ShareParams params, std::uint64_t seed) {
  ChaChaStream rng(seed);
  return sealed_encode(data, params, rng);
}

Bytes sealed_decode(std::span<const Share> shares) {
  const auto family = checked_family(shares, Scheme::rs_sealed);

  std::vector<Share> key_family;
  for (int i = 0; i < family.front()->params.k; ++i) {
    const Share& s = *family[static_cast<std::size_t>(i)];
    if (s.key_share.size() != kSealedKeyBytes)
      throw InconsistencyError("share " + std::to_string(s.index) + " carries no 16-byte key share");
    Share ks;
    ks.index = s.index;
    ks.payload = s.key_share;
    key_family.push_back(std::move(ks));
  }
  std::vector<const Share*> key_ptrs;
  for (const auto& ks : key_family) key_ptrs.push_back(&ks);
  Bytes key = detail::interpolate_at_zero(key_ptrs, family.front()->params.k);

  Bytes out = seal_cipher(key, decode_family(family));
  sodium_memzero(key.data(), key.size());
  verify_object_id(out, family.front()->object_id);
  return out;
}

}  // namespace dgrid

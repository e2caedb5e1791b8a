#include "dgrid/shamir.hpp"

#include "dgrid/error.hpp"

namespace dgrid {

GfMatrix vandermonde(int n, int k) {
  GfMatrix v(n, k);
  for (int i = 0; i < n; ++i) {
    Gf256 p(1);
    for (int j = 0; j < k; ++j) {
      v(i, j) = p;
      p = p * Gf256(i + 1);
    }
  }
  return v;
}

GfVector lagrange_weights_at_zero(std::span<const int> xs) {
  GfVector w(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Gf256 num(1), den(1);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      num *= Gf256(xs[j]);
      den *= Gf256(xs[j]) - Gf256(xs[i]);
    }
    w(static_cast<Eigen::Index>(i)) = num / den;
  }
  return w;
}

namespace detail {

void check_split_args(ByteView secret, ShareParams params) {
  params.validate();
  if (secret.empty()) throw DomainError("cannot split an empty secret");
}

std::vector<Share> shares_from_coefficients(ByteView secret, ShareParams params,
                                            const GfMatrix& coefficients) {
  const GfRowMatrix evaluated = vandermonde(params.n, params.k) * coefficients;
  const ObjectId id = object_id_of(secret);

  std::vector<Share> shares(static_cast<std::size_t>(params.n));
  for (int i = 0; i < params.n; ++i) {
    Share& s = shares[static_cast<std::size_t>(i)];
    s.params = params;
    s.index = i + 1;
    s.scheme = Scheme::shamir;
    s.object_id = id;
    s.original_length = secret.size();
    s.payload.resize(secret.size());
    for (std::size_t j = 0; j < secret.size(); ++j)
      s.payload[j] = evaluated(i, static_cast<Eigen::Index>(j)).value;
  }
  return shares;
}

}  // namespace detail

std::vector<Share> split(ByteView secret, ShareParams params, ChaChaStream& rng) {
  return split_with(secret, params, [&rng] { return rng.next_byte(); });
}

std::vector<Share> split(ByteView secret, ShareParams params, std::uint64_t seed) {
  ChaChaStream rng(seed);
  return split(secret, params, rng);
}

namespace detail {

Bytes interpolate_at_zero(const std::vector<const Share*>& family, int k) {
  const std::size_t len = family.front()->payload.size();
  std::vector<int> xs;
  GfMatrix ys(k, static_cast<Eigen::Index>(len));
  for (int i = 0; i < k; ++i) {
    const Share& s = *family[static_cast<std::size_t>(i)];
    xs.push_back(s.index);
    for (std::size_t j = 0; j < len; ++j) ys(i, static_cast<Eigen::Index>(j)) = Gf256(s.payload[j]);
  }
  const GfMatrix secret = lagrange_weights_at_zero(xs).transpose() * ys;

  Bytes out(len);
  for (std::size_t j = 0; j < len; ++j) out[j] = secret(0, static_cast<Eigen::Index>(j)).value;
  return out;
}

}  // namespace detail

Bytes reconstruct(std::span<const Share> shares) {
  if (shares.empty()) throw InsufficientSharesError("no shares supplied");
  const auto family = check_family(shares, Scheme::shamir);
  const ShareParams params = family.front()->params;
  if (static_cast<int>(family.size()) < params.k)
    throw InsufficientSharesError("need " + std::to_string(params.k) + " shares, got " +
                                  std::to_string(family.size()));
  if (family.front()->original_length != family.front()->payload.size())
    throw InconsistencyError("Shamir payload length differs from original length");

  Bytes out = detail::interpolate_at_zero(family, params.k);
  verify_object_id(out, family.front()->object_id);
  return out;
}

}  // namespace dgrid

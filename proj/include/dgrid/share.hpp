#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dgrid {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// First 16 bytes of a BLAKE2b digest of an object's plaintext.
using ObjectId = std::array<std::uint8_t, 16>;

ObjectId object_id_of(ByteView data);
std::string to_hex(ByteView bytes);
inline std::string to_hex(const ObjectId& id) { return to_hex(ByteView(id)); }
/// Parses a 32-character hex string; nullopt on any malformation.
std::optional<ObjectId> object_id_from_hex(std::string_view hex);

enum class Scheme : std::uint8_t { shamir = 1, rs_systematic = 2, rs_sealed = 3, fragment = 4 };

std::string_view scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(std::string_view name);

/// Threshold k of n, 1 <= k <= n <= 255.
struct ShareParams {
  int k = 1;
  int n = 1;

  /// Throws ParameterError unless 1 <= k <= n <= 255.
  void validate() const;

  friend bool operator==(const ShareParams&, const ShareParams&) = default;
};

struct Share {
  ShareParams params;
  int index = 1;  // 1..n; the evaluation point for Shamir
  Scheme scheme = Scheme::shamir;
  ObjectId object_id{};
  std::uint64_t original_length = 0;
  Bytes key_share;  // nonempty only for rs_sealed
  Bytes payload;

  friend bool operator==(const Share&, const Share&) = default;
};

/// Header checks shared by every reconstruction path: same object, scheme
/// and params; distinct indices; equal payload lengths (unless
/// `allow_ragged`). Returns the shares reordered by index. Throws
/// InconsistencyError; does not check the threshold.
std::vector<const Share*> check_family(std::span<const Share> shares, Scheme expected,
                                       bool allow_ragged = false);

/// Throws IntegrityError if the digest of `data` differs from `id`.
void verify_object_id(ByteView data, const ObjectId& id);

}  // namespace dgrid

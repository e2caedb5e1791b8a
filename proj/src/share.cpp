#include "dgrid/share.hpp"

#include <algorithm>

#include <sodium.h>

#include "dgrid/error.hpp"
#include "sodium_init.hpp"

namespace dgrid {

ObjectId object_id_of(ByteView data) {
  ensure_sodium();
  ObjectId id{};
  crypto_generichash(id.data(), id.size(), data.data(), data.size(), nullptr, 0);
  return id;
}

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

std::optional<ObjectId> object_id_from_hex(std::string_view hex) {
  if (hex.size() != 32) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  ObjectId id{};
  for (std::size_t i = 0; i < id.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    id[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return id;
}

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::shamir: return "shamir";
    case Scheme::rs_systematic: return "rs_systematic";
    case Scheme::rs_sealed: return "rs_sealed";
    case Scheme::fragment: return "fragment";
  }
  return "unknown";
}

std::optional<Scheme> scheme_from_name(std::string_view name) {
  for (auto s : {Scheme::shamir, Scheme::rs_systematic, Scheme::rs_sealed, Scheme::fragment})
    if (scheme_name(s) == name) return s;
  return std::nullopt;
}

void ShareParams::validate() const {
  if (k < 1) throw ParameterError("threshold k must be at least 1");
  if (n > 255) throw ParameterError("share count n must not exceed 255");
  if (k > n)
    throw ParameterError("threshold k=" + std::to_string(k) + " exceeds share count n=" +
                         std::to_string(n));
}

std::vector<const Share*> check_family(std::span<const Share> shares, Scheme expected,
                                       bool allow_ragged) {
  std::vector<const Share*> out;
  if (shares.empty()) return out;
  const Share& first = shares.front();
  for (const auto& s : shares) {
    if (s.scheme != expected)
      throw InconsistencyError("share scheme " + std::string(scheme_name(s.scheme)) +
                               ", expected " + std::string(scheme_name(expected)));
    if (s.object_id != first.object_id) throw InconsistencyError("shares of different objects");
    if (s.params != first.params) throw InconsistencyError("shares with different (k, n)");
    if (s.original_length != first.original_length)
      throw InconsistencyError("shares disagree on original length");
    if (!allow_ragged && s.payload.size() != first.payload.size())
      throw InconsistencyError("shares disagree on payload length");
    if (s.index < 1 || s.index > s.params.n)
      throw InconsistencyError("share index " + std::to_string(s.index) + " outside [1, n]");
    out.push_back(&s);
  }
  std::sort(out.begin(), out.end(), [](const Share* a, const Share* b) { return a->index < b->index; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i]->index == out[i - 1]->index)
      throw InconsistencyError("duplicate share index " + std::to_string(out[i]->index));
  return out;
}

void verify_object_id(ByteView data, const ObjectId& id) {
  if (object_id_of(data) != id)
    throw IntegrityError("reconstructed bytes do not match object id " + to_hex(id));
}

}  // namespace dgrid

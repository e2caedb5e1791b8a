#include "dgrid/random.hpp"

#include <stdexcept>

#include <sodium.h>

#include "sodium_init.hpp"

namespace dgrid {

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

ChaChaStream::ChaChaStream(std::uint64_t seed, std::uint64_t stream) {
  ensure_sodium();
  std::array<std::uint8_t, 8> seed_le{};
  for (int i = 0; i < 8; ++i) seed_le[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  crypto_generichash(key_.data(), key_.size(), seed_le.data(), seed_le.size(), nullptr, 0);
  for (int i = 0; i < 8; ++i) nonce_[i] = static_cast<std::uint8_t>(stream >> (8 * i));
}

ChaChaStream ChaChaStream::from_entropy() {
  ensure_sodium();
  ChaChaStream s;
  randombytes_buf(s.key_.data(), s.key_.size());
  return s;
}

ChaChaStream ChaChaStream::fork(std::uint64_t stream) const {
  ChaChaStream s;
  s.key_ = key_;
  for (int i = 0; i < 8; ++i) s.nonce_[i] = static_cast<std::uint8_t>(stream >> (8 * i));
  return s;
}

void ChaChaStream::refill() {
  block_.fill(0);
  crypto_stream_chacha20_ietf_xor_ic(block_.data(), block_.data(), block_.size(), nonce_.data(),
                                     counter_++, key_.data());
  used_ = 0;
}

void ChaChaStream::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) b = next_byte();
}

std::uint8_t ChaChaStream::next_byte() {
  if (used_ == block_.size()) refill();
  return block_[used_++];
}

std::uint32_t ChaChaStream::next_u32() {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(next_byte()) << (8 * i);
  return v;
}

std::uint64_t ChaChaStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

std::uint64_t ChaChaStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: zero bound");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

bool ChaChaStream::bernoulli(double p) {
  const double u = static_cast<double>(next_u32()) * 0x1p-32;
  return u < p;
}

}  // namespace dgrid

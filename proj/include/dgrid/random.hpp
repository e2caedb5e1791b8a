#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

namespace dgrid {

/// Deterministic ChaCha20 (IETF variant) keystream used as the library's
/// only random source.
///
/// The 256-bit key is BLAKE2b-256 of the 64-bit seed; `stream` selects an
/// independent nonce under the same key, so (seed, trial) pairs yield
/// unrelated streams without re-deriving keys. Satisfies
/// UniformRandomBitGenerator for use with <algorithm>.
class ChaChaStream {
 public:
  using result_type = std::uint64_t;

  explicit ChaChaStream(std::uint64_t seed, std::uint64_t stream = 0);

  /// Key drawn from the operating system's entropy source.
  static ChaChaStream from_entropy();

  /// Fresh stream under the same key with a different nonce.
  ChaChaStream fork(std::uint64_t stream) const;

  void fill(std::span<std::uint8_t> out);
  std::uint8_t next_byte();
  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform integer in [0, bound); bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound);

  /// True with probability p, using a 32-bit uniform draw.
  bool bernoulli(double p);

  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  ChaChaStream() = default;
  void refill();

  std::array<std::uint8_t, 32> key_{};
  std::array<std::uint8_t, 12> nonce_{};
  std::uint32_t counter_ = 0;
  std::array<std::uint8_t, 64> block_{};
  std::size_t used_ = 64;
};

}  // namespace dgrid

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace collabcipher {

/// Shared secret plus an optional context salt (epoch, author, ...). Equal
/// (password, context) pairs derive identical permutations everywhere.
struct CipherKey {
  std::vector<std::uint8_t> password;
  std::vector<std::uint8_t> context;

  CipherKey(std::string_view password_utf8, std::string_view context_utf8 = {});
};

using Seed = std::array<std::uint8_t, 32>;

/// SHA-256(block_id as 4-byte big-endian || 0x00 || password || 0x00 || context).
/// The 0x00 separators keep the concatenation injective.
Seed derive_seed(std::uint32_t block_id, const CipherKey& key);

/// Deterministic keystream: ChaCha20 with the seed as key, zero nonce, and a
/// 32-bit little-endian block counter. 32-bit draws consume keystream bytes
/// sequentially, little-endian.
class ChaChaStream {
 public:
  explicit ChaChaStream(const Seed& key, std::uint32_t block_counter = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform draw in [0, bound) by rejection sampling on 32-bit words, so no
  /// modulo bias. bound must be >= 1.
  std::uint32_t below(std::uint32_t bound);

 private:
  void refill();

  std::array<std::uint32_t, 8> key_words_;
  std::uint32_t counter_;
  std::array<std::uint8_t, 64> block_;
  std::size_t pos_;
};

struct Permutation {
  std::vector<std::uint32_t> forward;
  std::vector<std::uint32_t> inverse;

  std::uint32_t size() const { return static_cast<std::uint32_t>(forward.size()); }
};

/// Fisher-Yates shuffle of identity[0..k) driven by the seed's ChaCha20
/// keystream: for i = k-1 down to 1, swap a[i] with a[below(i+1)].
Permutation seeded_permutation(const Seed& seed, std::uint32_t k);

/// Builds a Permutation from an explicit forward array, deriving the inverse.
/// Throws IntegrityError when the array is not a bijection.
Permutation permutation_from_forward(std::vector<std::uint32_t> forward);

/// Swaps forward and inverse. Validates bijectivity first.
Permutation invert(const Permutation& p);

/// Raw SHA-256, exposed for seed-related tooling.
std::array<std::uint8_t, 32> sha256(const std::uint8_t* data, std::size_t len);

/// 32-byte stream key derived from a user-facing 64-bit seed and a domain tag.
Seed stream_key(std::uint64_t user_seed, std::string_view tag);

/// Stream key drawn from the operating system entropy source.
Seed os_random_key();

}  // namespace collabcipher

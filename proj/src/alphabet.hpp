// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace collabcipher::alphabet {

// Plaintext alphabet: the 95 printable ASCII characters.
inline constexpr char32_t kPlainLo = 0x0020;
inline constexpr char32_t kPlainHi = 0x007E;
inline constexpr std::uint32_t kAlphabetSize = 95;

// Ciphertext codepoint space: the surrogate-free range 0x0020..0xD7FF.
inline constexpr char32_t kCipherLo = 0x0020;
inline constexpr char32_t kCipherHi = 0xD7FF;
inline constexpr std::uint32_t kCipherSpaceSize = 55264;

// Fixed partition of the ciphertext space into 95-codepoint blocks. The 69
// codepoints above the last full block are never emitted.
inline constexpr std::uint32_t kNumBlocks = 581;
inline constexpr std::uint32_t kUnusedTail = 69;
inline constexpr char32_t kLastUsable = 0xD7BA;

constexpr bool is_plain_char(char32_t c) noexcept {
  return c >= kPlainLo && c <= kPlainHi;
}

constexpr bool is_usable_cipher(char32_t cp) noexcept {
  return cp >= kCipherLo && cp <= kLastUsable;
}

/// Zero-based position of a printable ASCII character in the alphabet.
std::uint32_t char_to_index(char32_t c);

char32_t index_to_char(std::uint32_t index);

struct BlockRef {
  std::uint32_t block_id;  // 1-based
  std::uint32_t offset;    // 0..94
};

/// Locates a usable ciphertext codepoint in the block partition.
BlockRef block_of(char32_t cp);

struct CodepointRange {
  char32_t lo;
  char32_t hi;
};

/// Inclusive codepoint range of a block (block 1 is printable ASCII itself).
CodepointRange block_range(std::uint32_t block_id);

}  // namespace collabcipher::alphabet

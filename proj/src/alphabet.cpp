// SPDX-License-Identifier: Apache-2.0
#include "alphabet.hpp"

#include <string>

#include "errors.hpp"

namespace collabcipher::alphabet {

namespace {
std::string hex(char32_t cp) {
  static const char* digits = "0123456789ABCDEF";
  std::string s = "0x";
  bool seen = false;
  for (int shift = 28; shift >= 0; shift -= 4) {
    unsigned d = (static_cast<std::uint32_t>(cp) >> shift) & 0xF;
    if (d != 0 || seen || shift < 16) {
      s.push_back(digits[d]);
      seen = true;
    }
  }
  return s;
}
}  // namespace

std::uint32_t char_to_index(char32_t c) {
  if (!is_plain_char(c)) {
    throw DomainError("character " + hex(c) + " is not printable ASCII");
  }
  return static_cast<std::uint32_t>(c - kPlainLo);
}

char32_t index_to_char(std::uint32_t index) {
  if (index >= kAlphabetSize) {
    throw DomainError("alphabet index " + std::to_string(index) + " out of range");
  }
  return kPlainLo + static_cast<char32_t>(index);
}

BlockRef block_of(char32_t cp) {
  if (cp < kCipherLo || cp > kCipherHi) {
    throw DomainError("codepoint " + hex(cp) + " outside the ciphertext space");
  }
  if (cp > kLastUsable) {
    throw DomainError("codepoint " + hex(cp) + " lies in the unused tail");
  }
  std::uint32_t off = static_cast<std::uint32_t>(cp - kCipherLo);
  return BlockRef{off / kAlphabetSize + 1, off % kAlphabetSize};
}

CodepointRange block_range(std::uint32_t block_id) {
  if (block_id < 1 || block_id > kNumBlocks) {
    throw DomainError("block id " + std::to_string(block_id) + " out of range [1, 581]");
  }
  char32_t lo = kCipherLo + static_cast<char32_t>((block_id - 1) * kAlphabetSize);
  return CodepointRange{lo, lo + kAlphabetSize - 1};
}

}  // namespace collabcipher::alphabet

// SPDX-License-Identifier: Apache-2.0
#include "keyed_rand.hpp"

#include <openssl/rand.h>
#include <openssl/sha.h>

#include <bit>
#include <cstring>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace collabcipher {

CipherKey::CipherKey(std::string_view password_utf8, std::string_view context_utf8)
    : password(password_utf8.begin(), password_utf8.end()),
      context(context_utf8.begin(), context_utf8.end()) {
  if (password.empty()) throw DomainError("password must be non-empty");
}

std::array<std::uint8_t, 32> sha256(const std::uint8_t* data, std::size_t len) {
  std::array<std::uint8_t, 32> out{};
  SHA256(data, len, out.data());
  return out;
}

Seed derive_seed(std::uint32_t block_id, const CipherKey& key) {
  std::vector<std::uint8_t> buf;
  buf.reserve(6 + key.password.size() + key.context.size());
  buf.push_back(static_cast<std::uint8_t>(block_id >> 24));
  buf.push_back(static_cast<std::uint8_t>(block_id >> 16));
  buf.push_back(static_cast<std::uint8_t>(block_id >> 8));
  buf.push_back(static_cast<std::uint8_t>(block_id));
  buf.push_back(0x00);
  buf.insert(buf.end(), key.password.begin(), key.password.end());
  buf.push_back(0x00);
  buf.insert(buf.end(), key.context.begin(), key.context.end());
  return sha256(buf.data(), buf.size());
}

namespace {

inline std::uint32_t rotl(std::uint32_t x, int n) { return (x << n) | (x >> (32 - n)); }

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c,
                          std::uint32_t& d) {
  a += b; d ^= a; d = rotl(d, 16);
  c += d; b ^= c; b = rotl(b, 12);
  a += b; d ^= a; d = rotl(d, 8);
  c += d; b ^= c; b = rotl(b, 7);
}

// One ChaCha20 block (RFC 8439), zero nonce, 32-bit counter.
void chacha20_block(const std::array<std::uint32_t, 8>& key, std::uint32_t counter,
                    std::array<std::uint8_t, 64>& out) {
  std::uint32_t state[16] = {
      0x61707865, 0x3320646e, 0x79622d32, 0x6b206574,
      key[0], key[1], key[2], key[3],
      key[4], key[5], key[6], key[7],
      counter, 0, 0, 0,
  };
  std::uint32_t x[16];
  std::memcpy(x, state, sizeof(x));
  for (int round = 0; round < 10; ++round) {
    quarter_round(x[0], x[4], x[8], x[12]);
    quarter_round(x[1], x[5], x[9], x[13]);
    quarter_round(x[2], x[6], x[10], x[14]);
    quarter_round(x[3], x[7], x[11], x[15]);
    quarter_round(x[0], x[5], x[10], x[15]);
    quarter_round(x[1], x[6], x[11], x[12]);
    quarter_round(x[2], x[7], x[8], x[13]);
    quarter_round(x[3], x[4], x[9], x[14]);
  }
  for (int i = 0; i < 16; ++i) {
    std::uint32_t w = x[i] + state[i];
    out[4 * i + 0] = static_cast<std::uint8_t>(w);
    out[4 * i + 1] = static_cast<std::uint8_t>(w >> 8);
    out[4 * i + 2] = static_cast<std::uint8_t>(w >> 16);
    out[4 * i + 3] = static_cast<std::uint8_t>(w >> 24);
  }
}

}  // namespace

ChaChaStream::ChaChaStream(const Seed& key, std::uint32_t block_counter)
    : counter_(block_counter), pos_(64) {
  for (int i = 0; i < 8; ++i) {
    key_words_[i] = static_cast<std::uint32_t>(key[4 * i]) |
                    (static_cast<std::uint32_t>(key[4 * i + 1]) << 8) |
                    (static_cast<std::uint32_t>(key[4 * i + 2]) << 16) |
                    (static_cast<std::uint32_t>(key[4 * i + 3]) << 24);
  }
}

void ChaChaStream::refill() {
  chacha20_block(key_words_, counter_, block_);
  ++counter_;
  pos_ = 0;
}

std::uint32_t ChaChaStream::next_u32() {
  if (pos_ + 4 > 64) refill();
  std::uint32_t w;
  std::memcpy(&w, block_.data() + pos_, 4);
  pos_ += 4;
  if constexpr (std::endian::native == std::endian::big) {
    w = __builtin_bswap32(w);
  }
  return w;
}

std::uint64_t ChaChaStream::next_u64() {
  std::uint64_t hi = next_u32();
  std::uint64_t lo = next_u32();
  return lo | (hi << 32);
}

std::uint32_t ChaChaStream::below(std::uint32_t bound) {
  if (bound == 0) throw DomainError("rejection bound must be >= 1");
  if (bound == 1) return 0;
  // Largest multiple of bound that fits in 2^32; words past it are rejected.
  std::uint32_t limit = static_cast<std::uint32_t>(
      (std::uint64_t{1} << 32) / bound * bound);
  for (;;) {
    std::uint32_t w = next_u32();
    if (limit == 0 || w < limit) return w % bound;
  }
}

Permutation seeded_permutation(const Seed& seed, std::uint32_t k) {
  if (k == 0) throw DomainError("permutation size must be >= 1");
  Permutation p;
  p.forward.resize(k);
  std::iota(p.forward.begin(), p.forward.end(), 0u);
  ChaChaStream stream(seed);
  for (std::uint32_t i = k - 1; i >= 1; --i) {
    std::uint32_t j = stream.below(i + 1);
    std::swap(p.forward[i], p.forward[j]);
  }
  p.inverse.resize(k);
  for (std::uint32_t i = 0; i < k; ++i) p.inverse[p.forward[i]] = i;
  return p;
}

Permutation permutation_from_forward(std::vector<std::uint32_t> forward) {
  const std::uint32_t k = static_cast<std::uint32_t>(forward.size());
  Permutation p;
  p.forward = std::move(forward);
  p.inverse.assign(k, k);
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint32_t v = p.forward[i];
    if (v >= k || p.inverse[v] != k) {
      throw IntegrityError("forward array is not a bijection on [0, " +
                           std::to_string(k) + ")");
    }
    p.inverse[v] = i;
  }
  return p;
}

Permutation invert(const Permutation& p) {
  Permutation checked = permutation_from_forward(p.forward);
  return Permutation{checked.inverse, checked.forward};
}

Seed stream_key(std::uint64_t user_seed, std::string_view tag) {
  std::vector<std::uint8_t> buf(tag.begin(), tag.end());
  buf.push_back(0x00);
  for (int shift = 56; shift >= 0; shift -= 8) {
    buf.push_back(static_cast<std::uint8_t>(user_seed >> shift));
  }
  return sha256(buf.data(), buf.size());
}

Seed os_random_key() {
  Seed s{};
  if (RAND_bytes(s.data(), static_cast<int>(s.size())) != 1) {
    throw IoError("operating system entropy source unavailable");
  }
  return s;
}

}  // namespace collabcipher

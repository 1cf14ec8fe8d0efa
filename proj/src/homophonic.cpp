// SPDX-License-Identifier: Apache-2.0
#include "homophonic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "alphabet.hpp"
#include "errors.hpp"

namespace collabcipher {

namespace {
void finish(BinAllocation& a) {
  a.offsets.resize(a.sizes.size());
  std::uint32_t off = 0;
  for (std::size_t i = 0; i < a.sizes.size(); ++i) {
    a.offsets[i] = off;
    off += a.sizes[i];
  }
  a.total = off;
}
}  // namespace

BinAllocation BinAllocation::proportional(const std::vector<double>& probs,
                                          std::uint32_t total) {
  const std::uint32_t m = static_cast<std::uint32_t>(probs.size());
  if (m == 0 || m > alphabet::kAlphabetSize) {
    throw DomainError("allocation supports 1..95 characters");
  }
  if (total < m) {
    throw DomainError("ciphertext alphabet smaller than the plaintext alphabet");
  }
  BinAllocation a;
  a.sizes.resize(m);
  std::vector<double> frac(m);
  std::uint64_t assigned = 0;
  for (std::uint32_t i = 0; i < m; ++i) {
    const double exact = probs[i] * static_cast<double>(total);
    const double fl = std::floor(exact);
    a.sizes[i] = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(fl));
    frac[i] = exact - fl;
    assigned += a.sizes[i];
  }
  if (assigned < total) {
    // Hand out the leftovers by largest fractional part, ties by character.
    std::uint32_t remaining = total - static_cast<std::uint32_t>(assigned);
    std::vector<std::uint32_t> order(m);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return frac[x] > frac[y]; });
    for (std::uint32_t k = 0; k < remaining; ++k) ++a.sizes[order[k % m]];
  } else if (assigned > total) {
    // The min-size floor overshot; take back from the largest bins.
    std::uint64_t excess = assigned - total;
    while (excess > 0) {
      std::uint32_t largest = 0;
      for (std::uint32_t i = 1; i < m; ++i) {
        if (a.sizes[i] > a.sizes[largest]) largest = i;
      }
      if (a.sizes[largest] <= 1) {
        throw DomainError("cannot fit non-empty bins into the requested space");
      }
      std::uint32_t take = static_cast<std::uint32_t>(
          std::min<std::uint64_t>(excess, a.sizes[largest] - 1));
      a.sizes[largest] -= take;
      excess -= take;
    }
  }
  finish(a);
  return a;
}

BinAllocation BinAllocation::proportional(const FrequencyTable& freq, std::uint32_t total) {
  return proportional(std::vector<double>(freq.probs().begin(), freq.probs().end()), total);
}

BinAllocation BinAllocation::from_sizes(std::vector<std::uint32_t> sizes) {
  if (sizes.empty() || sizes.size() > alphabet::kAlphabetSize) {
    throw DomainError("allocation supports 1..95 characters");
  }
  for (std::uint32_t s : sizes) {
    if (s == 0) throw DomainError("every bin needs at least one homophone");
  }
  BinAllocation a;
  a.sizes = std::move(sizes);
  finish(a);
  return a;
}

std::uint32_t BinAllocation::char_of(std::uint32_t index) const {
  if (index >= total) throw IntegrityError("ciphertext index out of range");
  auto it = std::upper_bound(offsets.begin(), offsets.end(), index);
  return static_cast<std::uint32_t>(it - offsets.begin()) - 1;
}

std::string BinAllocation::to_json() const {
  nlohmann::ordered_json j;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::string key(1, static_cast<char>(alphabet::kPlainLo + i));
    j[key] = sizes[i];
  }
  return j.dump(2);
}

std::vector<double> ciphertext_unigram(const BinAllocation& alloc,
                                       const std::vector<double>& probs) {
  if (probs.size() != alloc.sizes.size()) {
    throw DomainError("probability vector does not match the allocation");
  }
  std::vector<double> q(alloc.total);
  for (std::size_t i = 0; i < alloc.sizes.size(); ++i) {
    const double qi = probs[i] / static_cast<double>(alloc.sizes[i]);
    for (std::uint32_t k = 0; k < alloc.sizes[i]; ++k) q[alloc.offsets[i] + k] = qi;
  }
  return q;
}

std::vector<double> ciphertext_unigram(const BinAllocation& alloc,
                                       const FrequencyTable& freq) {
  return ciphertext_unigram(alloc,
                            std::vector<double>(freq.probs().begin(), freq.probs().end()));
}

HomophonicCipher::HomophonicCipher(BinAllocation alloc, const CipherKey& key)
    : HomophonicCipher(std::move(alloc),
                       Permutation{}) {
  perm_ = seeded_permutation(derive_seed(0, key), alloc_.total);
}

HomophonicCipher::HomophonicCipher(BinAllocation alloc, Permutation global)
    : alloc_(std::move(alloc)), perm_(std::move(global)) {
  if (!perm_.forward.empty() && perm_.size() != alloc_.total) {
    throw DomainError("global permutation size must match the allocation");
  }
  char_of_index_.resize(alloc_.total);
  for (std::size_t i = 0; i < alloc_.sizes.size(); ++i) {
    std::fill_n(char_of_index_.begin() + alloc_.offsets[i], alloc_.sizes[i],
                static_cast<std::uint8_t>(i));
  }
}

std::uint32_t HomophonicCipher::encrypt_index(std::uint32_t char_index,
                                              ChaChaStream& rng) const {
  if (char_index >= alloc_.num_chars()) throw DomainError("alphabet index out of range");
  const std::uint32_t x = alloc_.offsets[char_index] + rng.below(alloc_.sizes[char_index]);
  return perm_.forward[x];
}

std::uint32_t HomophonicCipher::decrypt_index(std::uint32_t cipher_index) const {
  if (cipher_index >= alloc_.total) {
    throw IntegrityError("ciphertext index out of range");
  }
  return char_of_index_[perm_.inverse[cipher_index]];
}

char32_t HomophonicCipher::encrypt_char(char32_t plain, ChaChaStream& rng) const {
  if (alloc_.total > alphabet::kCipherSpaceSize) {
    throw DomainError("allocation too large for the wire codepoint range");
  }
  return alphabet::kCipherLo + encrypt_index(alphabet::char_to_index(plain), rng);
}

char32_t HomophonicCipher::decrypt_char(char32_t cp) const {
  if (cp < alphabet::kCipherLo ||
      cp >= alphabet::kCipherLo + static_cast<char32_t>(alloc_.total)) {
    throw IntegrityError("codepoint outside the homophonic ciphertext range");
  }
  return alphabet::index_to_char(
      decrypt_index(static_cast<std::uint32_t>(cp - alphabet::kCipherLo)));
}

std::u32string HomophonicCipher::encrypt(std::u32string_view plain, ChaChaStream& rng) const {
  std::u32string out;
  out.reserve(plain.size());
  for (std::size_t i = 0; i < plain.size(); ++i) {
    try {
      out.push_back(encrypt_char(plain[i], rng));
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at position " + std::to_string(i), i);
    }
  }
  return out;
}

std::u32string HomophonicCipher::decrypt(std::u32string_view ciphertext) const {
  std::u32string out;
  out.reserve(ciphertext.size());
  for (std::size_t i = 0; i < ciphertext.size(); ++i) {
    try {
      out.push_back(decrypt_char(ciphertext[i]));
    } catch (const IntegrityError& e) {
      throw IntegrityError(std::string(e.what()) + " at index " + std::to_string(i), i);
    }
  }
  return out;
}

}  // namespace collabcipher

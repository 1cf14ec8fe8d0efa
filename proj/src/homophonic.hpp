// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "entropy.hpp"
#include "keyed_rand.hpp"

namespace collabcipher {

/// Disjoint contiguous ciphertext bins, one per plaintext character, sized in
/// proportion to the character's probability (largest-remainder rounding with
/// a minimum size of 1). The deployed cipher uses the 95-character alphabet;
/// smaller alphabets are allowed for analysis setups.
struct BinAllocation {
  std::vector<std::uint32_t> sizes;    // one entry per character, each >= 1
  std::vector<std::uint32_t> offsets;  // bin start indices, offsets[0] == 0
  std::uint32_t total = 0;

  static BinAllocation proportional(const std::vector<double>& probs, std::uint32_t total);
  static BinAllocation proportional(const FrequencyTable& freq, std::uint32_t total);
  static BinAllocation from_sizes(std::vector<std::uint32_t> sizes);

  std::uint32_t num_chars() const { return static_cast<std::uint32_t>(sizes.size()); }
  std::uint32_t char_of(std::uint32_t index) const;  // pre-permutation index -> char

  /// JSON object: character -> bin size (95-character alphabet order).
  std::string to_json() const;
};

/// Ciphertext unigram pmf q: q_j = p_i / |bin_i| for every index j in bin i.
/// Indexed pre-permutation; the keyed permutation only relabels.
std::vector<double> ciphertext_unigram(const BinAllocation& alloc,
                                       const std::vector<double>& probs);
std::vector<double> ciphertext_unigram(const BinAllocation& alloc,
                                       const FrequencyTable& freq);

/// Homophonic substitution: a character is drawn uniformly from its bin, then
/// mapped through one keyed global permutation of the whole index space.
class HomophonicCipher {
 public:
  /// The global permutation is keyed via the reserved block id 0, so one
  /// password keys both this cipher and the fixed-block cipher without
  /// overlapping derivations.
  HomophonicCipher(BinAllocation alloc, const CipherKey& key);
  HomophonicCipher(BinAllocation alloc, Permutation global);  // test-injectable

  std::uint32_t encrypt_index(std::uint32_t char_index, ChaChaStream& rng) const;
  std::uint32_t decrypt_index(std::uint32_t cipher_index) const;

  /// Wire form: index + 0x20. Requires total <= 55264 so output stays inside
  /// the ciphertext codepoint space.
  char32_t encrypt_char(char32_t plain, ChaChaStream& rng) const;
  char32_t decrypt_char(char32_t cp) const;

  std::u32string encrypt(std::u32string_view plain, ChaChaStream& rng) const;
  std::u32string decrypt(std::u32string_view ciphertext) const;

  const BinAllocation& allocation() const noexcept { return alloc_; }
  const Permutation& global_permutation() const noexcept { return perm_; }

 private:
  BinAllocation alloc_;
  Permutation perm_;
  std::vector<std::uint8_t> char_of_index_;  // pre-permutation lookup
};

}  // namespace collabcipher

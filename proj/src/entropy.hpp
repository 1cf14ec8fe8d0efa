// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "keyed_rand.hpp"

namespace collabcipher {

/// Symbol histogram over arbitrary codepoints.
class Histogram {
 public:
  void add(char32_t symbol, std::uint64_t n = 1);
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t count(char32_t symbol) const;
  const std::unordered_map<char32_t, std::uint64_t>& counts() const noexcept {
    return counts_;
  }

  /// Shannon entropy -sum (c/total) log2(c/total), with 0 log 0 = 0.
  /// Throws DomainError on an empty histogram.
  double entropy_bits() const;

 private:
  std::unordered_map<char32_t, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Unigram probability mass function over the 95-character alphabet.
class FrequencyTable {
 public:
  static FrequencyTable from_counts(const std::array<std::uint64_t, 95>& counts);
  static FrequencyTable from_probs(const std::array<double, 95>& probs);

  /// Normalized counts of the printable-ASCII characters in the corpus;
  /// everything else is ignored. Throws DomainError when no character of the
  /// corpus is in the alphabet.
  static FrequencyTable estimate(std::u32string_view corpus);
  static FrequencyTable estimate_utf8(std::string_view corpus_utf8);

  double prob(std::uint32_t index) const { return probs_[index]; }
  const std::array<double, 95>& probs() const noexcept { return probs_; }

  /// Raw counts when the table came from a corpus; all-zero otherwise.
  const std::array<std::uint64_t, 95>& counts() const noexcept { return counts_; }

  double entropy_bits() const;

  /// Alphabet indices sorted by descending probability (ties by index).
  std::vector<std::uint32_t> ranked() const;

  /// JSON object of single-character strings to probabilities.
  std::string to_json() const;
  static FrequencyTable from_json(std::string_view json);

 private:
  FrequencyTable() = default;
  std::array<double, 95> probs_{};
  std::array<std::uint64_t, 95> counts_{};
};

/// Fraction of a text's characters that fall in the reference table's ten most
/// frequent characters. Scores near the reference's own top-10 mass suggest
/// readable text; near-zero scores suggest ciphertext.
double top10_score(std::u32string_view text, const FrequencyTable& reference);

struct BlockEntropyRow {
  std::uint32_t block_id;
  std::uint64_t count;
  double entropy_bits;
};

/// `block_id,count,entropy_bits` rows, one per block.
std::string block_report_csv(const std::vector<BlockEntropyRow>& rows);

/// Per-block offset histograms of a ciphertext, sorted by descending entropy.
std::vector<BlockEntropyRow> ciphertext_block_report(std::u32string_view ciphertext);

/// Online greedy entropy maximization: each character goes to the block whose
/// histogram entropy it most raises (ties uniform at random). Empty blocks
/// count as entropy 0, so their delta is 0.
class GreedyBlockState {
 public:
  GreedyBlockState(std::uint32_t num_blocks, const Seed& tie_key);
  GreedyBlockState(std::uint32_t num_blocks, std::uint64_t tie_seed);

  /// Picks the argmax block for the character, updates the histogram, and
  /// returns the chosen 1-based block id.
  std::uint32_t choose_and_add(std::uint32_t char_index);

  /// Entropy delta of hypothetically adding char_index to a block; exposed so
  /// the argmax property is independently checkable.
  double delta_bits(std::uint32_t block, std::uint32_t char_index) const;

  std::uint32_t num_blocks() const noexcept { return num_blocks_; }
  std::uint64_t total() const noexcept { return grand_total_; }
  std::uint64_t block_total(std::uint32_t block) const { return totals_[block]; }
  std::uint64_t block_count(std::uint32_t block, std::uint32_t char_index) const;
  double block_entropy_bits(std::uint32_t block) const;

  /// Sorted (descending entropy) report over nonempty blocks.
  std::vector<BlockEntropyRow> entropy_report() const;

 private:
  double xlog_(std::uint64_t m) const;  // m * log2(m)
  double gain_(std::uint64_t m) const;  // (m+1)log2(m+1) - m log2(m)
  void refresh_coeffs_(std::uint32_t block);

  std::uint32_t num_blocks_;
  std::uint64_t grand_total_ = 0;
  // counts_[char][block] so the per-character argmax scan is contiguous.
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint64_t> totals_;
  std::vector<double> sum_xlog_;  // per block: sum over chars of n log2 n
  // Scan coefficients: delta(b, c) = base_[b] - gain(count) * scale_[b];
  // zeroed for empty blocks so the delta is exactly 0 there.
  std::vector<double> base_;
  std::vector<double> scale_;
  mutable std::vector<double> gain_table_;
  ChaChaStream tie_rng_;
};

}  // namespace collabcipher

// SPDX-License-Identifier: Apache-2.0
#include "entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "alphabet.hpp"
#include "errors.hpp"
#include "utf8.hpp"

namespace collabcipher {

void Histogram::add(char32_t symbol, std::uint64_t n) {
  if (n == 0) return;
  counts_[symbol] += n;
  total_ += n;
}

std::uint64_t Histogram::count(char32_t symbol) const {
  auto it = counts_.find(symbol);
  return it == counts_.end() ? 0 : it->second;
}

double Histogram::entropy_bits() const {
  if (total_ == 0) throw DomainError("entropy of an empty histogram is undefined");
  double h = 0.0;
  const double total = static_cast<double>(total_);
  for (const auto& [sym, c] : counts_) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

FrequencyTable FrequencyTable::from_counts(const std::array<std::uint64_t, 95>& counts) {
  std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw DomainError("no in-alphabet characters to estimate from");
  FrequencyTable t;
  t.counts_ = counts;
  for (std::size_t i = 0; i < 95; ++i) {
    t.probs_[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return t;
}

FrequencyTable FrequencyTable::from_probs(const std::array<double, 95>& probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0 || !std::isfinite(p)) throw DomainError("probabilities must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("probabilities must sum to 1");
  FrequencyTable t;
  t.probs_ = probs;
  return t;
}

FrequencyTable FrequencyTable::estimate(std::u32string_view corpus) {
  std::array<std::uint64_t, 95> counts{};
  for (char32_t c : corpus) {
    if (alphabet::is_plain_char(c)) ++counts[c - alphabet::kPlainLo];
  }
  return from_counts(counts);
}

FrequencyTable FrequencyTable::estimate_utf8(std::string_view corpus_utf8) {
  // ASCII-only scan; multi-byte sequences can never hit the 0x20..0x7E range.
  std::array<std::uint64_t, 95> counts{};
  for (unsigned char b : corpus_utf8) {
    if (b >= 0x20 && b <= 0x7E) ++counts[b - 0x20];
  }
  return from_counts(counts);
}

double FrequencyTable::entropy_bits() const {
  double h = 0.0;
  for (double p : probs_) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

std::vector<std::uint32_t> FrequencyTable::ranked() const {
  std::vector<std::uint32_t> idx(95);
  std::iota(idx.begin(), idx.end(), 0u);
  std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return probs_[a] > probs_[b];
  });
  return idx;
}

std::string FrequencyTable::to_json() const {
  nlohmann::ordered_json j;
  for (std::uint32_t i = 0; i < 95; ++i) {
    std::string key(1, static_cast<char>(alphabet::kPlainLo + i));
    j[key] = probs_[i];
  }
  return j.dump(2);
}

FrequencyTable FrequencyTable::from_json(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("frequency JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("frequency JSON must be an object");
  std::array<double, 95> probs{};
  for (auto& [key, value] : j.items()) {
    std::u32string k32 = utf8_decode(key);
    if (k32.size() != 1 || !alphabet::is_plain_char(k32[0])) {
      throw DomainError("frequency JSON key '" + key + "' is not a printable ASCII character");
    }
    probs[k32[0] - alphabet::kPlainLo] = value.get<double>();
  }
  return from_probs(probs);
}

double top10_score(std::u32string_view text, const FrequencyTable& reference) {
  if (text.empty()) return 0.0;
  auto ranked = reference.ranked();
  std::array<bool, 95> top{};
  for (std::size_t i = 0; i < 10 && i < ranked.size(); ++i) top[ranked[i]] = true;
  std::uint64_t hits = 0;
  for (char32_t c : text) {
    if (alphabet::is_plain_char(c) && top[c - alphabet::kPlainLo]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(text.size());
}

std::string block_report_csv(const std::vector<BlockEntropyRow>& rows) {
  std::string out = "block_id,count,entropy_bits\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%u,%llu,%.6f\n", r.block_id,
                  static_cast<unsigned long long>(r.count), r.entropy_bits);
    out += buf;
  }
  return out;
}

std::vector<BlockEntropyRow> ciphertext_block_report(std::u32string_view ciphertext) {
  std::unordered_map<std::uint32_t, Histogram> per_block;
  for (char32_t cp : ciphertext) {
    if (!alphabet::is_usable_cipher(cp)) continue;
    auto ref = alphabet::block_of(cp);
    per_block[ref.block_id].add(static_cast<char32_t>(ref.offset));
  }
  std::vector<BlockEntropyRow> rows;
  rows.reserve(per_block.size());
  for (const auto& [block_id, hist] : per_block) {
    rows.push_back({block_id, hist.total(), hist.entropy_bits()});
  }
  std::sort(rows.begin(), rows.end(), [](const BlockEntropyRow& a, const BlockEntropyRow& b) {
    if (a.entropy_bits != b.entropy_bits) return a.entropy_bits > b.entropy_bits;
    return a.block_id < b.block_id;
  });
  return rows;
}

GreedyBlockState::GreedyBlockState(std::uint32_t num_blocks, const Seed& tie_key)
    : num_blocks_(num_blocks),
      counts_(static_cast<std::size_t>(num_blocks) * alphabet::kAlphabetSize, 0),
      totals_(num_blocks, 0),
      sum_xlog_(num_blocks, 0.0),
      base_(num_blocks, 0.0),
      scale_(num_blocks, 0.0),
      tie_rng_(tie_key) {
  if (num_blocks == 0) throw DomainError("need at least one block");
  gain_table_.reserve(1024);
}

GreedyBlockState::GreedyBlockState(std::uint32_t num_blocks, std::uint64_t tie_seed)
    : GreedyBlockState(num_blocks, stream_key(tie_seed, "greedy-tie")) {}

double GreedyBlockState::xlog_(std::uint64_t m) const {
  return m == 0 ? 0.0 : static_cast<double>(m) * std::log2(static_cast<double>(m));
}

double GreedyBlockState::gain_(std::uint64_t m) const {
  if (m < gain_table_.size()) return gain_table_[m];
  while (gain_table_.size() <= m) {
    std::uint64_t v = gain_table_.size();
    gain_table_.push_back(xlog_(v + 1) - xlog_(v));
  }
  return gain_table_[m];
}

void GreedyBlockState::refresh_coeffs_(std::uint32_t b) {
  const double n = static_cast<double>(totals_[b]);
  // H(hist + c) - H(hist) = log2((N+1)/N) + S/(N(N+1)) - gain(m)/(N+1)
  base_[b] = std::log2((n + 1.0) / n) + sum_xlog_[b] / (n * (n + 1.0));
  scale_[b] = 1.0 / (n + 1.0);
}

double GreedyBlockState::delta_bits(std::uint32_t b, std::uint32_t c) const {
  const std::uint32_t m = counts_[static_cast<std::size_t>(c) * num_blocks_ + b];
  return base_[b] - gain_(m) * scale_[b];
}

std::uint32_t GreedyBlockState::choose_and_add(std::uint32_t char_index) {
  if (char_index >= alphabet::kAlphabetSize) {
    throw DomainError("alphabet index " + std::to_string(char_index) + " out of range");
  }
  const std::uint32_t* row = counts_.data() + static_cast<std::size_t>(char_index) * num_blocks_;
  double best = -std::numeric_limits<double>::infinity();
  std::uint32_t pick = 0;
  std::uint32_t ties = 0;
  for (std::uint32_t b = 0; b < num_blocks_; ++b) {
    const double d = base_[b] - gain_(row[b]) * scale_[b];
    if (d > best) {
      best = d;
      pick = b;
      ties = 1;
    } else if (d == best) {
      ++ties;
      if (tie_rng_.below(ties) == 0) pick = b;
    }
  }
  auto& cell = counts_[static_cast<std::size_t>(char_index) * num_blocks_ + pick];
  sum_xlog_[pick] += gain_(cell);
  ++cell;
  ++totals_[pick];
  ++grand_total_;
  refresh_coeffs_(pick);
  return pick + 1;
}

std::uint64_t GreedyBlockState::block_count(std::uint32_t b, std::uint32_t c) const {
  return counts_[static_cast<std::size_t>(c) * num_blocks_ + b];
}

double GreedyBlockState::block_entropy_bits(std::uint32_t b) const {
  const std::uint64_t n = totals_[b];
  if (n == 0) throw DomainError("entropy of an empty block is undefined");
  return std::log2(static_cast<double>(n)) - sum_xlog_[b] / static_cast<double>(n);
}

std::vector<BlockEntropyRow> GreedyBlockState::entropy_report() const {
  std::vector<BlockEntropyRow> rows;
  for (std::uint32_t b = 0; b < num_blocks_; ++b) {
    if (totals_[b] == 0) continue;
    rows.push_back({b + 1, totals_[b], block_entropy_bits(b)});
  }
  std::sort(rows.begin(), rows.end(), [](const BlockEntropyRow& a, const BlockEntropyRow& x) {
    if (a.entropy_bits != x.entropy_bits) return a.entropy_bits > x.entropy_bits;
    return a.block_id < x.block_id;
  });
  return rows;
}

}  // namespace collabcipher

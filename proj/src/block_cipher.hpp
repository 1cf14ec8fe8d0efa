// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "entropy.hpp"
#include "keyed_rand.hpp"

namespace collabcipher {

enum class BlockPolicy {
  kUniform,  // block drawn uniformly from [1, 581]
  kGreedy,   // greedy entropy maximization over per-block histograms
  kFixed,    // always the configured block (test and baseline instrumentation)
};

/// Picks the 1-based block id for the next character.
class BlockChooser {
 public:
  virtual ~BlockChooser() = default;
  virtual std::uint32_t choose(std::uint32_t char_index) = 0;
};

/// Provides per-block permutations. The keyed source derives and caches them;
/// tests may inject doubles (identity tables, canned fixtures).
class PermutationSource {
 public:
  virtual ~PermutationSource() = default;
  virtual const Permutation& block_permutation(std::uint32_t block_id) = 0;
};

class KeyedPermutationSource final : public PermutationSource {
 public:
  explicit KeyedPermutationSource(CipherKey key);
  const Permutation& block_permutation(std::uint32_t block_id) override;

 private:
  CipherKey key_;
  std::unordered_map<std::uint32_t, Permutation> cache_;
};

struct SessionOptions {
  BlockPolicy policy = BlockPolicy::kUniform;
  std::uint32_t fixed_block = 1;           // used by kFixed
  std::optional<std::uint64_t> seed;       // pins uniform draws and tie breaks
};

struct SessionStats {
  std::uint64_t chars_encrypted = 0;
  std::uint64_t blocks_used = 0;  // distinct blocks touched
};

/// Single-writer encryption session. Decryption is stateless; see Decryptor.
class CipherSession {
 public:
  CipherSession(const CipherKey& key, const SessionOptions& options);

  /// Test hook: custom chooser and/or permutation source.
  CipherSession(std::unique_ptr<BlockChooser> chooser,
                std::unique_ptr<PermutationSource> perms);

  char32_t encrypt_char(char32_t plain);

  /// Character-wise map; the i-th output depends only on the i-th input and
  /// the policy's i-th choice. Throws DomainError with the offending position.
  std::u32string encrypt(std::u32string_view plain);

  std::string encrypt_utf8(std::string_view plain_utf8);

  const GreedyBlockState* greedy_state() const noexcept { return greedy_.get(); }
  SessionStats stats() const;

 private:
  std::unique_ptr<GreedyBlockState> greedy_;
  std::unique_ptr<BlockChooser> chooser_;
  std::unique_ptr<PermutationSource> perms_;
  std::vector<bool> block_seen_;
  std::uint64_t chars_encrypted_ = 0;
  std::uint64_t distinct_blocks_ = 0;
};

/// Stateless character-wise decryption with a per-instance permutation cache.
class Decryptor {
 public:
  explicit Decryptor(const CipherKey& key);

  /// Test hook.
  explicit Decryptor(std::unique_ptr<PermutationSource> perms);

  char32_t decrypt_char(char32_t cp);

  /// Throws IntegrityError carrying the index of the first invalid codepoint.
  std::u32string decrypt(std::u32string_view ciphertext);

  std::string decrypt_utf8(std::string_view ciphertext_utf8);

 private:
  std::unique_ptr<PermutationSource> perms_;
};

/// Classical keyed single-table substitution over the 95-character alphabet:
/// the attackable control cipher. Equivalent to always using block 1.
class SubstitutionCipher {
 public:
  explicit SubstitutionCipher(const CipherKey& key);
  explicit SubstitutionCipher(Permutation table);  // test-injectable mapping

  char32_t encrypt_char(char32_t plain) const;
  char32_t decrypt_char(char32_t cipher) const;
  std::u32string encrypt(std::u32string_view plain) const;
  std::u32string decrypt(std::u32string_view cipher) const;

  const Permutation& table() const noexcept { return table_; }

 private:
  Permutation table_;
};

}  // namespace collabcipher

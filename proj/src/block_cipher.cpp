// SPDX-License-Identifier: Apache-2.0
#include "block_cipher.hpp"

#include "alphabet.hpp"
#include "errors.hpp"
#include "utf8.hpp"

namespace collabcipher {

namespace {

class UniformChooser final : public BlockChooser {
 public:
  explicit UniformChooser(const Seed& key) : rng_(key) {}
  std::uint32_t choose(std::uint32_t) override {
    return rng_.below(alphabet::kNumBlocks) + 1;
  }

 private:
  ChaChaStream rng_;
};

class GreedyChooser final : public BlockChooser {
 public:
  explicit GreedyChooser(GreedyBlockState* state) : state_(state) {}
  std::uint32_t choose(std::uint32_t char_index) override {
    return state_->choose_and_add(char_index);
  }

 private:
  GreedyBlockState* state_;
};

class FixedChooser final : public BlockChooser {
 public:
  explicit FixedChooser(std::uint32_t block_id) : block_id_(block_id) {
    alphabet::block_range(block_id);  // validate
  }
  std::uint32_t choose(std::uint32_t) override { return block_id_; }

 private:
  std::uint32_t block_id_;
};

}  // namespace

KeyedPermutationSource::KeyedPermutationSource(CipherKey key) : key_(std::move(key)) {}

const Permutation& KeyedPermutationSource::block_permutation(std::uint32_t block_id) {
  auto it = cache_.find(block_id);
  if (it == cache_.end()) {
    it = cache_
             .emplace(block_id, seeded_permutation(derive_seed(block_id, key_),
                                                   alphabet::kAlphabetSize))
             .first;
  }
  return it->second;
}

CipherSession::CipherSession(const CipherKey& key, const SessionOptions& options)
    : perms_(std::make_unique<KeyedPermutationSource>(key)),
      block_seen_(alphabet::kNumBlocks + 1, false) {
  switch (options.policy) {
    case BlockPolicy::kUniform: {
      Seed s = options.seed ? stream_key(*options.seed, "uniform-policy") : os_random_key();
      chooser_ = std::make_unique<UniformChooser>(s);
      break;
    }
    case BlockPolicy::kGreedy: {
      Seed s = options.seed ? stream_key(*options.seed, "greedy-tie") : os_random_key();
      greedy_ = std::make_unique<GreedyBlockState>(alphabet::kNumBlocks, s);
      chooser_ = std::make_unique<GreedyChooser>(greedy_.get());
      break;
    }
    case BlockPolicy::kFixed:
      chooser_ = std::make_unique<FixedChooser>(options.fixed_block);
      break;
  }
}

CipherSession::CipherSession(std::unique_ptr<BlockChooser> chooser,
                             std::unique_ptr<PermutationSource> perms)
    : chooser_(std::move(chooser)),
      perms_(std::move(perms)),
      block_seen_(alphabet::kNumBlocks + 1, false) {}

char32_t CipherSession::encrypt_char(char32_t plain) {
  const std::uint32_t index = alphabet::char_to_index(plain);
  const std::uint32_t block_id = chooser_->choose(index);
  const Permutation& p = perms_->block_permutation(block_id);
  ++chars_encrypted_;
  if (!block_seen_[block_id]) {
    block_seen_[block_id] = true;
    ++distinct_blocks_;
  }
  return alphabet::block_range(block_id).lo + static_cast<char32_t>(p.forward[index]);
}

std::u32string CipherSession::encrypt(std::u32string_view plain) {
  std::u32string out;
  out.reserve(plain.size());
  for (std::size_t i = 0; i < plain.size(); ++i) {
    try {
      out.push_back(encrypt_char(plain[i]));
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at position " + std::to_string(i), i);
    }
  }
  return out;
}

std::string CipherSession::encrypt_utf8(std::string_view plain_utf8) {
  return utf8_encode(encrypt(utf8_decode(plain_utf8)));
}

SessionStats CipherSession::stats() const {
  return SessionStats{chars_encrypted_, distinct_blocks_};
}

Decryptor::Decryptor(const CipherKey& key)
    : perms_(std::make_unique<KeyedPermutationSource>(key)) {}

Decryptor::Decryptor(std::unique_ptr<PermutationSource> perms) : perms_(std::move(perms)) {}

char32_t Decryptor::decrypt_char(char32_t cp) {
  alphabet::BlockRef ref;
  try {
    ref = alphabet::block_of(cp);
  } catch (const DomainError& e) {
    throw IntegrityError(std::string("not a valid ciphertext codepoint: ") + e.what());
  }
  const Permutation& p = perms_->block_permutation(ref.block_id);
  return alphabet::index_to_char(p.inverse[ref.offset]);
}

std::u32string Decryptor::decrypt(std::u32string_view ciphertext) {
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

std::string Decryptor::decrypt_utf8(std::string_view ciphertext_utf8) {
  return utf8_encode(decrypt(utf8_decode(ciphertext_utf8)));
}

SubstitutionCipher::SubstitutionCipher(const CipherKey& key)
    : table_(seeded_permutation(derive_seed(1, key), alphabet::kAlphabetSize)) {}

SubstitutionCipher::SubstitutionCipher(Permutation table) : table_(std::move(table)) {
  if (table_.size() != alphabet::kAlphabetSize) {
    throw DomainError("substitution table must cover the 95-character alphabet");
  }
  table_ = permutation_from_forward(table_.forward);  // validates bijectivity
}

char32_t SubstitutionCipher::encrypt_char(char32_t plain) const {
  return alphabet::index_to_char(table_.forward[alphabet::char_to_index(plain)]);
}

char32_t SubstitutionCipher::decrypt_char(char32_t cipher) const {
  return alphabet::index_to_char(table_.inverse[alphabet::char_to_index(cipher)]);
}

std::u32string SubstitutionCipher::encrypt(std::u32string_view plain) const {
  std::u32string out;
  out.reserve(plain.size());
  for (char32_t c : plain) out.push_back(encrypt_char(c));
  return out;
}

std::u32string SubstitutionCipher::decrypt(std::u32string_view cipher) const {
  std::u32string out;
  out.reserve(cipher.size());
  for (char32_t c : cipher) out.push_back(decrypt_char(c));
  return out;
}

}  // namespace collabcipher

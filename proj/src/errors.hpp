// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collabcipher {

inline constexpr std::size_t kNoOffset = static_cast<std::size_t>(-1);

/// Input outside an operation's domain (bad character, bad parameter, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what, std::size_t offset = kNoOffset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Corrupted or foreign data: malformed ciphertext, non-bijective tables.
class IntegrityError : public std::runtime_error {
 public:
  explicit IntegrityError(const std::string& what, std::size_t offset = kNoOffset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace collabcipher

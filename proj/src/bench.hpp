// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "block_cipher.hpp"

namespace collabcipher {

struct BenchRow {
  std::uint64_t n_chars;
  double micros;  // median time of one middleware call over this payload size
};

struct LinearFit {
  double slope;      // micros per char
  double intercept;  // micros
  double r2;
};

/// Times middleware encryption of single insert events of the given payload
/// sizes. Medians over `reps` repetitions, permutations prewarmed.
std::vector<BenchRow> bench_middleware(const CipherKey& key, BlockPolicy policy,
                                       const std::vector<std::uint64_t>& sizes,
                                       std::uint32_t reps, std::uint64_t seed);

/// Least-squares fit of micros against n_chars.
LinearFit linear_fit(const std::vector<BenchRow>& rows);

/// `n_chars,micros` CSV.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace collabcipher

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entropy.hpp"

namespace collabcipher {

/// Binary Kullback-Leibler divergence in nats between (u, 1-u) and (v, 1-v):
/// u ln(u/v) + (1-u) ln((1-u)/(1-v)), with 0 ln 0 = 0. Returns +infinity when
/// v == 0 with u > 0 or v == 1 with u < 1. Internally evaluated in extended
/// precision: the interesting exponents come from near-total cancellation.
double kl_binary(double u, double v);

/// The probability r at which D(r||q0) == D(r||q1); the MAP decision
/// threshold is n * r counts.
double crossover_probability(double q0, double q1);

/// Chernoff error exponent D(r(q0,q1) || q0) in nats per sample.
double error_exponent(double q0, double q1);

/// Real-valued sample-complexity bound ln(1/epsilon) / D(r||q0); +infinity
/// when the exponent is zero (the test cannot distinguish the symbols).
double sample_complexity_bound(double epsilon, double q0, double q1);

/// The bound rounded to the nearest whole sample count.
std::uint64_t sample_complexity(double epsilon, double q0, double q1);

/// How many times more ciphertext the expanded alphabet forces the attacker
/// to collect: D(r(p0,p1)||p0) / D(r(q0,q1)||q0). +infinity on a zero
/// denominator.
double complexity_ratio(double p0, double p1, double q0, double q1);

struct BinaryChannelSpec {
  double q0;
  double q1;
  std::uint32_t n;
  double prior0 = 0.5;
};

/// MAP decision between hypotheses 0 and 1 given n_j successes out of n.
/// Ties go to 0.
int map_decide(std::uint64_t n_j, const BinaryChannelSpec& spec);

struct ErrorProbEstimate {
  double p_e;
  double ci_lo;  // 95% interval
  double ci_hi;
  std::uint64_t trials;
};

/// Plain Monte Carlo estimate of the MAP error probability with a Wilson
/// confidence interval. Each trial's randomness comes from a counter-mode
/// stream indexed by the trial number, so results do not depend on batching.
ErrorProbEstimate simulate_error_prob(const BinaryChannelSpec& spec,
                                      std::uint64_t trials, std::uint64_t seed);

/// Importance-sampled estimate with the binomial parameter tilted to the
/// crossover probability; usable deep in the large-deviations regime where
/// plain Monte Carlo would observe no errors at all. Unbiased; the interval
/// is a normal approximation from the weight variance.
ErrorProbEstimate simulate_error_prob_tilted(const BinaryChannelSpec& spec,
                                             std::uint64_t trials, std::uint64_t seed);

/// Exact MAP error probability by binomial summation in extended precision.
double exact_error_prob(const BinaryChannelSpec& spec);

struct AttackGuess {
  char32_t symbol;        // ciphertext symbol
  std::uint64_t count;    // occurrences
  char32_t proposed;      // plaintext character proposed by rank alignment
  std::optional<bool> correct;
};

struct AttackReport {
  std::vector<AttackGuess> guesses;      // top-k by frequency
  std::optional<double> accuracy;        // fraction correct, when truth known
  std::uint64_t ciphertext_length = 0;
  std::uint64_t distinct_symbols = 0;

  std::string to_json() const;
};

/// Unigram frequency attack: ranks ciphertext symbols by frequency and aligns
/// them with the reference table's ranks. `truth` maps a ciphertext symbol to
/// the plaintext character it really encrypts.
AttackReport unigram_attack(std::u32string_view ciphertext,
                            const FrequencyTable& reference, std::size_t top_k = 10,
                            const std::function<char32_t(char32_t)>* truth = nullptr);

}  // namespace collabcipher

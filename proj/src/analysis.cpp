// SPDX-License-Identifier: Apache-2.0
#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "alphabet.hpp"
#include "errors.hpp"
#include "keyed_rand.hpp"
#include "utf8.hpp"

namespace collabcipher {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long double kl_binary_l(long double u, long double v) {
  if (u < 0.0L || u > 1.0L || v < 0.0L || v > 1.0L) {
    throw DomainError("KL arguments must lie in [0, 1]");
  }
  if ((v == 0.0L && u > 0.0L) || (v == 1.0L && u < 1.0L)) {
    return std::numeric_limits<long double>::infinity();
  }
  long double d = 0.0L;
  if (u > 0.0L) d += u * (std::log(u) - std::log(v));
  if (u < 1.0L) d += (1.0L - u) * (std::log1p(-u) - std::log1p(-v));
  return d;
}

long double crossover_l(long double q0, long double q1) {
  if (!(q0 > 0.0L && q0 < 1.0L && q1 > 0.0L && q1 < 1.0L)) {
    throw DomainError("crossover needs probabilities strictly inside (0, 1)");
  }
  if (q0 == q1) throw DomainError("crossover undefined for identical probabilities");
  const long double num = std::log1p(-q0) - std::log1p(-q1);
  const long double den = num + std::log(q1) - std::log(q0);
  return num / den;
}

// log Binomial(n_j; n, q) density, natural log.
long double log_binom_pmf(std::uint64_t n, std::uint64_t n_j, long double q) {
  const long double lc = std::lgammal(static_cast<long double>(n) + 1.0L) -
                         std::lgammal(static_cast<long double>(n_j) + 1.0L) -
                         std::lgammal(static_cast<long double>(n - n_j) + 1.0L);
  long double lt = 0.0L;
  if (n_j > 0) lt += static_cast<long double>(n_j) * std::log(q);
  if (n_j < n) lt += static_cast<long double>(n - n_j) * std::log1p(-q);
  return lc + lt;
}

struct Wilson {
  double lo, hi;
};

Wilson wilson_interval(std::uint64_t hits, std::uint64_t n, double z = 1.959963985) {
  if (n == 0) return {0.0, 1.0};
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  const double z2n = z * z / static_cast<double>(n);
  const double center = (p + z2n / 2.0) / (1.0 + z2n);
  const double half =
      z * std::sqrt(p * (1.0 - p) / static_cast<double>(n) + z2n / (4.0 * static_cast<double>(n))) /
      (1.0 + z2n);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void check_channel(const BinaryChannelSpec& spec) {
  if (!(spec.q0 > 0.0 && spec.q0 < 1.0 && spec.q1 > 0.0 && spec.q1 < 1.0)) {
    throw DomainError("channel probabilities must lie strictly inside (0, 1)");
  }
  if (!(spec.prior0 >= 0.0 && spec.prior0 <= 1.0)) {
    throw DomainError("prior must lie in [0, 1]");
  }
}

// 64-bit Bernoulli threshold for probability q.
std::uint64_t bernoulli_threshold(long double q) {
  const long double scaled = q * 18446744073709551616.0L;  // q * 2^64
  if (scaled >= 18446744073709551615.0L) return ~std::uint64_t{0};
  return static_cast<std::uint64_t>(scaled);
}

// Keystream blocks reserved per trial; covers n Bernoulli draws plus slack.
std::uint32_t trial_stride(std::uint32_t n) {
  const std::uint64_t bytes = (static_cast<std::uint64_t>(n) + 2) * 8;
  return static_cast<std::uint32_t>(bytes / 64 + 2);
}

}  // namespace

double kl_binary(double u, double v) {
  return static_cast<double>(kl_binary_l(u, v));
}

double crossover_probability(double q0, double q1) {
  return static_cast<double>(crossover_l(q0, q1));
}

double error_exponent(double q0, double q1) {
  return static_cast<double>(kl_binary_l(crossover_l(q0, q1), q0));
}

double sample_complexity_bound(double epsilon, double q0, double q1) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw DomainError("target error must lie in (0, 1]");
  }
  const long double d = kl_binary_l(crossover_l(q0, q1), q0);
  if (d == 0.0L) return kInf;
  return static_cast<double>(-std::log(static_cast<long double>(epsilon)) / d);
}

std::uint64_t sample_complexity(double epsilon, double q0, double q1) {
  const double bound = sample_complexity_bound(epsilon, q0, q1);
  if (!std::isfinite(bound)) {
    throw DomainError("zero error exponent: no finite sample count suffices");
  }
  return static_cast<std::uint64_t>(std::llround(bound));
}

double complexity_ratio(double p0, double p1, double q0, double q1) {
  const long double num = kl_binary_l(crossover_l(p0, p1), p0);
  const long double den = kl_binary_l(crossover_l(q0, q1), q0);
  if (den == 0.0L) return kInf;
  return static_cast<double>(num / den);
}

int map_decide(std::uint64_t n_j, const BinaryChannelSpec& spec) {
  check_channel(spec);
  if (n_j > spec.n) throw DomainError("success count exceeds the sample count");
  if (spec.prior0 >= 1.0) return 0;
  if (spec.prior0 <= 0.0) return 1;
  const long double s0 = std::log(static_cast<long double>(spec.prior0)) +
                         log_binom_pmf(spec.n, n_j, spec.q0);
  const long double s1 = std::log1p(-static_cast<long double>(spec.prior0)) +
                         log_binom_pmf(spec.n, n_j, spec.q1);
  return s1 > s0 ? 1 : 0;
}

ErrorProbEstimate simulate_error_prob(const BinaryChannelSpec& spec, std::uint64_t trials,
                                      std::uint64_t seed) {
  check_channel(spec);
  if (trials == 0) throw DomainError("need at least one trial");
  // Precompute the decision for every possible count once.
  std::vector<std::uint8_t> decision(spec.n + 1);
  for (std::uint64_t k = 0; k <= spec.n; ++k) {
    decision[k] = static_cast<std::uint8_t>(map_decide(k, spec));
  }
  const Seed key = stream_key(seed, "mc-naive");
  const std::uint64_t t_prior = bernoulli_threshold(static_cast<long double>(spec.prior0));
  const std::uint64_t t_q0 = bernoulli_threshold(static_cast<long double>(spec.q0));
  const std::uint64_t t_q1 = bernoulli_threshold(static_cast<long double>(spec.q1));
  const std::uint32_t stride = trial_stride(spec.n);
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    ChaChaStream rng(key, static_cast<std::uint32_t>(t * stride));
    const int h = rng.next_u64() < t_prior ? 0 : 1;
    const std::uint64_t thresh = h == 0 ? t_q0 : t_q1;
    std::uint64_t n_j = 0;
    for (std::uint32_t i = 0; i < spec.n; ++i) {
      if (rng.next_u64() < thresh) ++n_j;
    }
    if (decision[n_j] != h) ++errors;
  }
  const double p = static_cast<double>(errors) / static_cast<double>(trials);
  const Wilson w = wilson_interval(errors, trials);
  return {p, w.lo, w.hi, trials};
}

ErrorProbEstimate simulate_error_prob_tilted(const BinaryChannelSpec& spec,
                                             std::uint64_t trials, std::uint64_t seed) {
  check_channel(spec);
  if (trials == 0) throw DomainError("need at least one trial");
  if (spec.q0 == spec.q1) throw DomainError("tilted sampling needs distinct probabilities");
  std::vector<std::uint8_t> decision(spec.n + 1);
  for (std::uint64_t k = 0; k <= spec.n; ++k) {
    decision[k] = static_cast<std::uint8_t>(map_decide(k, spec));
  }
  // Sample counts from Binomial(n, r~) where r~ is the exactly-realized
  // threshold probability, and reweight; the error boundary sits at the tilt.
  const long double r = crossover_l(spec.q0, spec.q1);
  const std::uint64_t t_r = bernoulli_threshold(r);
  const long double r_hat =
      static_cast<long double>(t_r) / 18446744073709551616.0L;
  const long double log_q0 = std::log(static_cast<long double>(spec.q0));
  const long double log_1q0 = std::log1p(-static_cast<long double>(spec.q0));
  const long double log_q1 = std::log(static_cast<long double>(spec.q1));
  const long double log_1q1 = std::log1p(-static_cast<long double>(spec.q1));
  const long double log_r = std::log(r_hat);
  const long double log_1r = std::log1p(-r_hat);
  const long double pi0 = static_cast<long double>(spec.prior0);
  const long double pi1 = 1.0L - pi0;
  const std::uint32_t stride = trial_stride(spec.n);
  const Seed key = stream_key(seed, "mc-tilted");

  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  for (std::uint64_t t = 0; t < trials; ++t) {
    ChaChaStream rng(key, static_cast<std::uint32_t>(t * stride));
    std::uint64_t n_j = 0;
    for (std::uint32_t i = 0; i < spec.n; ++i) {
      if (rng.next_u64() < t_r) ++n_j;
    }
    const long double nl = static_cast<long double>(n_j);
    const long double nr = static_cast<long double>(spec.n - n_j);
    const long double log_tilt = nl * log_r + nr * log_1r;
    long double x = 0.0L;
    if (decision[n_j] == 1) {  // error under hypothesis 0
      x += pi0 * std::exp(nl * log_q0 + nr * log_1q0 - log_tilt);
    } else {                   // error under hypothesis 1
      x += pi1 * std::exp(nl * log_q1 + nr * log_1q1 - log_tilt);
    }
    sum += x;
    sum_sq += x * x;
  }
  const long double mean = sum / static_cast<long double>(trials);
  const long double var =
      std::max(0.0L, sum_sq / static_cast<long double>(trials) - mean * mean);
  const double se = static_cast<double>(std::sqrt(var / static_cast<long double>(trials)));
  const double p = static_cast<double>(mean);
  return {p, std::max(0.0, p - 1.959963985 * se), p + 1.959963985 * se, trials};
}

double exact_error_prob(const BinaryChannelSpec& spec) {
  check_channel(spec);
  long double p_err = 0.0L;
  const long double pi0 = static_cast<long double>(spec.prior0);
  const long double pi1 = 1.0L - pi0;
  for (std::uint64_t k = 0; k <= spec.n; ++k) {
    const int d = map_decide(k, spec);
    if (d == 1) {
      p_err += pi0 * std::exp(log_binom_pmf(spec.n, k, static_cast<long double>(spec.q0)));
    } else {
      p_err += pi1 * std::exp(log_binom_pmf(spec.n, k, static_cast<long double>(spec.q1)));
    }
  }
  return static_cast<double>(p_err);
}

std::string AttackReport::to_json() const {
  nlohmann::ordered_json j;
  j["ciphertext_length"] = ciphertext_length;
  j["distinct_symbols"] = distinct_symbols;
  if (accuracy) j["accuracy"] = *accuracy;
  auto& arr = j["guesses"] = nlohmann::ordered_json::array();
  for (const auto& g : guesses) {
    nlohmann::ordered_json e;
    std::string sym;
    utf8_append(sym, g.symbol);
    e["symbol"] = sym;
    e["codepoint"] = static_cast<std::uint32_t>(g.symbol);
    e["count"] = g.count;
    e["proposed"] = std::string(1, static_cast<char>(g.proposed));
    if (g.correct) e["correct"] = *g.correct;
    arr.push_back(std::move(e));
  }
  return j.dump(2);
}

AttackReport unigram_attack(std::u32string_view ciphertext, const FrequencyTable& reference,
                            std::size_t top_k,
                            const std::function<char32_t(char32_t)>* truth) {
  if (ciphertext.empty()) throw DomainError("cannot attack an empty ciphertext");
  std::unordered_map<char32_t, std::uint64_t> counts;
  for (char32_t c : ciphertext) ++counts[c];

  std::vector<std::pair<char32_t, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  const auto ref_ranked = reference.ranked();
  AttackReport report;
  report.ciphertext_length = ciphertext.size();
  report.distinct_symbols = ranked.size();
  const std::size_t k = std::min({top_k, ranked.size(), ref_ranked.size()});
  std::size_t correct = 0;
  for (std::size_t i = 0; i < k; ++i) {
    AttackGuess g;
    g.symbol = ranked[i].first;
    g.count = ranked[i].second;
    g.proposed = alphabet::index_to_char(ref_ranked[i]);
    if (truth && *truth) {
      g.correct = (*truth)(g.symbol) == g.proposed;
      if (*g.correct) ++correct;
    }
    report.guesses.push_back(g);
  }
  if (truth && *truth && k > 0) {
    report.accuracy = static_cast<double>(correct) / static_cast<double>(k);
  }
  return report;
}

}  // namespace collabcipher

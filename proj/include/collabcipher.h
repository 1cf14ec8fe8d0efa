/* SPDX-License-Identifier: Apache-2.0
 *
 * collabcipher - position-independent character-level encryption for
 * collaborative editors, plus the statistics and cryptanalysis toolkit
 * around it.
 *
 * Conventions:
 *   - Every fallible function returns a cc_status; CC_OK is 0.
 *   - On failure, cc_last_error() describes the problem (thread-local).
 *   - Strings returned through char** are NUL-terminated UTF-8 owned by the
 *     caller; release them with cc_string_free().
 *   - Handles are opaque; release them with their *_free function. NULL is
 *     always safe to free.
 */
#ifndef COLLABCIPHER_H
#define COLLABCIPHER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cc_status {
  CC_OK = 0,
  CC_ERROR_DOMAIN = 2,    /* input outside an operation's domain */
  CC_ERROR_INTEGRITY = 3, /* corrupted or foreign ciphertext / tables */
  CC_ERROR_IO = 4,
  CC_ERROR_INVALID = 5,   /* null handle, bad enum value, ... */
} cc_status;

typedef enum cc_policy {
  CC_POLICY_UNIFORM = 0, /* block drawn uniformly at random per character */
  CC_POLICY_GREEDY = 1,  /* greedy per-block entropy maximization */
  CC_POLICY_FIXED = 2,   /* always the configured block */
} cc_policy;

const char* cc_version(void);

/* Message for the most recent failure on this thread. */
const char* cc_last_error(void);

void cc_string_free(char* s);

/* Alphabet and block-partition constants as a JSON object. */
cc_status cc_info_json(char** out_json);

/* ------------------------------------------------------------------ keys */

typedef struct cc_key cc_key;

/* password: shared secret (non-empty). context: optional salt (may be NULL
 * or empty); changing it re-keys every derived permutation. */
cc_status cc_key_new(const char* password, const char* context, cc_key** out);
void cc_key_free(cc_key* key);

/* --------------------------------------------------- fixed-block cipher */

typedef struct cc_session cc_session;

/* An encryption session. fixed_block is used only by CC_POLICY_FIXED.
 * has_seed != 0 pins all random choices (reproducible output); otherwise the
 * choices come from the OS entropy source. Sessions are single-writer. */
cc_status cc_session_new(const cc_key* key, cc_policy policy, uint32_t fixed_block,
                         int has_seed, uint64_t seed, cc_session** out);
void cc_session_free(cc_session* session);

/* Strict transform: every character must be printable ASCII. */
cc_status cc_encrypt(cc_session* session, const char* plain_utf8, char** cipher_utf8);

/* Middleware transform: characters outside the alphabet pass through
 * unencrypted and are counted in *passthrough (may be NULL). */
cc_status cc_encrypt_permissive(cc_session* session, const char* plain_utf8,
                                char** cipher_utf8, uint64_t* passthrough);

/* {"chars_encrypted": n, "blocks_used": n} */
cc_status cc_session_stats_json(const cc_session* session, char** out_json);

/* Decryption is stateless given the key. The strict form rejects any
 * codepoint outside the usable blocks; the permissive form passes through
 * codepoints outside the ciphertext space entirely (tail codepoints still
 * fail, they cannot be produced by the cipher). */
cc_status cc_decrypt(const cc_key* key, const char* cipher_utf8, char** plain_utf8);
cc_status cc_decrypt_permissive(const cc_key* key, const char* cipher_utf8,
                                char** plain_utf8, uint64_t* passthrough);

/* Classical single-table substitution over printable ASCII (the attackable
 * control cipher). */
cc_status cc_substitution_encrypt(const cc_key* key, const char* plain_utf8, char** out);
cc_status cc_substitution_decrypt(const cc_key* key, const char* cipher_utf8, char** out);

/* --------------------------------------------------- frequency statistics */

typedef struct cc_freq cc_freq;

/* Normalized printable-ASCII character counts of the text. */
cc_status cc_freq_from_text(const char* text_utf8, cc_freq** out);

/* JSON object mapping single-character strings to probabilities. */
cc_status cc_freq_from_json(const char* json, cc_freq** out);
cc_status cc_freq_to_json(const cc_freq* freq, char** out_json);
void cc_freq_free(cc_freq* freq);

cc_status cc_freq_entropy_bits(const cc_freq* freq, double* out);

/* Fraction of text characters among the reference's ten most frequent
 * characters; a cheap readability score. */
cc_status cc_top10_score(const cc_freq* reference, const char* text_utf8, double* out);

/* Character entropy of a text (all codepoints). */
cc_status cc_text_entropy_bits(const char* text_utf8, double* out);

/* Per-block `block_id,count,entropy_bits` CSV for a ciphertext, sorted by
 * descending entropy. */
cc_status cc_block_entropy_csv(const char* cipher_utf8, char** out_csv);

/* ------------------------------------------------- homophonic cipher */

typedef struct cc_homophonic cc_homophonic;

/* Frequency-proportional bins over a ciphertext index space of `space_size`
 * symbols (>= 95, <= 55264 for wire output), globally permuted under the
 * key. has_seed pins the in-bin draws. */
cc_status cc_homophonic_new(const cc_freq* freq, uint32_t space_size, const cc_key* key,
                            int has_seed, uint64_t seed, cc_homophonic** out);
void cc_homophonic_free(cc_homophonic* cipher);

/* JSON object: character -> bin size. */
cc_status cc_homophonic_allocation_json(const cc_homophonic* cipher, char** out_json);

cc_status cc_homophonic_encrypt(cc_homophonic* cipher, const char* plain_utf8, char** out);
cc_status cc_homophonic_decrypt(const cc_homophonic* cipher, const char* cipher_utf8,
                                char** out);

/* --------------------------------------------------------- cryptanalysis */

/* Binary KL divergence u ln(u/v) + (1-u) ln((1-u)/(1-v)) in nats. */
cc_status cc_kl_binary(double u, double v, double* out);

/* Crossover probability r(q0, q1): D(r||q0) == D(r||q1). */
cc_status cc_crossover(double q0, double q1, double* out);

/* Chernoff exponent D(r(q0,q1)||q0) in nats per ciphertext character. */
cc_status cc_error_exponent(double q0, double q1, double* out);

/* Characters needed to decide a symbol at error epsilon: ln(1/eps)/D. */
cc_status cc_sample_complexity(double epsilon, double q0, double q1, double* out);

/* How many times more ciphertext alphabet expansion costs the attacker. */
cc_status cc_complexity_ratio(double p0, double p1, double q0, double q1, double* out);

/* MAP decision between hypotheses given n_j successes in n samples. */
cc_status cc_map_decide(uint32_t n, uint64_t n_j, double q0, double q1, double prior0,
                        int* decision);

/* Error probability of the MAP rule. method: 0 = plain Monte Carlo,
 * 1 = importance-sampled Monte Carlo (for large n), 2 = exact binomial sum
 * (trials/seed ignored). ci_lo/ci_hi may be NULL. */
cc_status cc_error_prob(uint32_t n, double q0, double q1, double prior0, int method,
                        uint64_t trials, uint64_t seed, double* p_e, double* ci_lo,
                        double* ci_hi);

/* Unigram frequency attack: rank-aligns ciphertext symbols against the
 * reference table. JSON report with the top_k guesses. */
cc_status cc_attack_json(const char* cipher_utf8, const cc_freq* reference,
                         uint32_t top_k, char** report_json);

/* --------------------------------------------- collaboration simulation */

/* Multi-client convergence simulation; JSON report. score_reference may be
 * NULL (skips the readability scores). */
cc_status cc_simulate_json(uint32_t clients, uint32_t events, uint64_t seed,
                           cc_policy policy, const char* password, const char* context,
                           const cc_freq* score_reference, char** report_json);

/* Middleware timing over payload sizes; emits `n_chars,micros` CSV and the
 * least-squares fit. Output pointers may be NULL. */
cc_status cc_bench_csv(const char* password, cc_policy policy, const uint64_t* sizes,
                       size_t n_sizes, uint32_t reps, uint64_t seed, char** out_csv,
                       double* slope_us_per_char, double* intercept_us, double* r2);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* COLLABCIPHER_H */

// SPDX-License-Identifier: Apache-2.0
#include "collabcipher.h"

#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "alphabet.hpp"
#include "analysis.hpp"
#include "bench.hpp"
#include "block_cipher.hpp"
#include "editstream.hpp"
#include "entropy.hpp"
#include "errors.hpp"
#include "homophonic.hpp"
#include "keyed_rand.hpp"
#include "utf8.hpp"

using namespace collabcipher;

extern "C" {

struct cc_key {
  CipherKey rep;
};

struct cc_session {
  CipherSession rep;
  std::uint64_t passthrough = 0;
};

struct cc_freq {
  FrequencyTable rep;
};

struct cc_homophonic {
  HomophonicCipher rep;
  ChaChaStream rng;
};

}  // extern "C"

namespace {

thread_local std::string g_last_error;

cc_status fail(cc_status code, const char* what) {
  g_last_error = what ? what : "unknown error";
  return code;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

cc_status give_string(const std::string& s, char** out) {
  *out = copy_string(s);
  return *out == nullptr ? fail(CC_ERROR_IO, "out of memory") : CC_OK;
}

// Runs the body, translating exceptions into status codes.
template <typename Fn>
cc_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    return fail(CC_ERROR_DOMAIN, e.what());
  } catch (const IntegrityError& e) {
    return fail(CC_ERROR_INTEGRITY, e.what());
  } catch (const IoError& e) {
    return fail(CC_ERROR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CC_ERROR_IO, "out of memory");
  } catch (const std::exception& e) {
    return fail(CC_ERROR_INVALID, e.what());
  }
}

cc_status need(bool ok, const char* what) {
  return ok ? CC_OK : fail(CC_ERROR_INVALID, what);
}

std::optional<BlockPolicy> to_policy(int policy) {
  switch (policy) {
    case CC_POLICY_UNIFORM:
      return BlockPolicy::kUniform;
    case CC_POLICY_GREEDY:
      return BlockPolicy::kGreedy;
    case CC_POLICY_FIXED:
      return BlockPolicy::kFixed;
    default:
      return std::nullopt;
  }
}

}  // namespace

extern "C" {

const char* cc_version(void) { return "0.1.0"; }

const char* cc_last_error(void) { return g_last_error.c_str(); }

void cc_string_free(char* s) { std::free(s); }

cc_status cc_info_json(char** out_json) {
  if (cc_status s = need(out_json != nullptr, "out_json is null")) return s;
  return guarded([&] {
    nlohmann::ordered_json j;
    j["plaintext_alphabet"] = {{"lo", 0x20}, {"hi", 0x7E}, {"size", alphabet::kAlphabetSize}};
    j["ciphertext_space"] = {{"lo", 0x20}, {"hi", 0xD7FF}, {"size", alphabet::kCipherSpaceSize}};
    j["block_size"] = alphabet::kAlphabetSize;
    j["num_blocks"] = alphabet::kNumBlocks;
    j["unused_tail"] = alphabet::kUnusedTail;
    j["last_usable_codepoint"] = static_cast<std::uint32_t>(alphabet::kLastUsable);
    return give_string(j.dump(2), out_json);
  });
}

cc_status cc_key_new(const char* password, const char* context, cc_key** out) {
  if (cc_status s = need(out != nullptr, "out is null")) return s;
  if (cc_status s = need(password != nullptr, "password is null")) return s;
  *out = nullptr;
  return guarded([&] {
    *out = new cc_key{CipherKey(password, context ? context : "")};
    return CC_OK;
  });
}

void cc_key_free(cc_key* key) { delete key; }

cc_status cc_session_new(const cc_key* key, cc_policy policy, uint32_t fixed_block,
                         int has_seed, uint64_t seed, cc_session** out) {
  if (cc_status s = need(out != nullptr, "out is null")) return s;
  if (cc_status s = need(key != nullptr, "key is null")) return s;
  *out = nullptr;
  const auto p = to_policy(policy);
  if (!p) return fail(CC_ERROR_INVALID, "unknown policy");
  return guarded([&] {
    SessionOptions opt;
    opt.policy = *p;
    opt.fixed_block = fixed_block == 0 ? 1 : fixed_block;
    if (has_seed) opt.seed = seed;
    *out = new cc_session{CipherSession(key->rep, opt), 0};
    return CC_OK;
  });
}

void cc_session_free(cc_session* session) { delete session; }

cc_status cc_encrypt(cc_session* session, const char* plain_utf8, char** cipher_utf8) {
  if (cc_status s = need(session && plain_utf8 && cipher_utf8, "null argument")) return s;
  return guarded([&] { return give_string(session->rep.encrypt_utf8(plain_utf8), cipher_utf8); });
}

cc_status cc_encrypt_permissive(cc_session* session, const char* plain_utf8,
                                char** cipher_utf8, uint64_t* passthrough) {
  if (cc_status s = need(session && plain_utf8 && cipher_utf8, "null argument")) return s;
  return guarded([&] {
    EditEvent event;
    event.op = "is";
    event.payload = utf8_decode(plain_utf8);
    std::string out_text;
    if (event.payload.empty()) {
      if (passthrough) *passthrough = 0;
      return give_string(out_text, cipher_utf8);
    }
    TransformStats stats;
    EditEvent transformed = middleware_outbound(event, session->rep, &stats);
    if (passthrough) *passthrough = stats.passthrough;
    session->passthrough += stats.passthrough;
    return give_string(utf8_encode(transformed.payload), cipher_utf8);
  });
}

cc_status cc_session_stats_json(const cc_session* session, char** out_json) {
  if (cc_status s = need(session && out_json, "null argument")) return s;
  return guarded([&] {
    const SessionStats st = session->rep.stats();
    nlohmann::ordered_json j;
    j["chars_encrypted"] = st.chars_encrypted;
    j["passthrough"] = session->passthrough;
    j["blocks_used"] = st.blocks_used;
    return give_string(j.dump(2), out_json);
  });
}

cc_status cc_decrypt(const cc_key* key, const char* cipher_utf8, char** plain_utf8) {
  if (cc_status s = need(key && cipher_utf8 && plain_utf8, "null argument")) return s;
  return guarded([&] {
    Decryptor d(key->rep);
    return give_string(d.decrypt_utf8(cipher_utf8), plain_utf8);
  });
}

cc_status cc_decrypt_permissive(const cc_key* key, const char* cipher_utf8,
                                char** plain_utf8, uint64_t* passthrough) {
  if (cc_status s = need(key && cipher_utf8 && plain_utf8, "null argument")) return s;
  return guarded([&] {
    EditEvent event;
    event.op = "is";
    event.payload = utf8_decode(cipher_utf8);
    if (event.payload.empty()) {
      if (passthrough) *passthrough = 0;
      return give_string(std::string{}, plain_utf8);
    }
    Decryptor d(key->rep);
    TransformStats stats;
    EditEvent transformed = middleware_inbound(event, d, &stats);
    if (passthrough) *passthrough = stats.passthrough;
    return give_string(utf8_encode(transformed.payload), plain_utf8);
  });
}

cc_status cc_substitution_encrypt(const cc_key* key, const char* plain_utf8, char** out) {
  if (cc_status s = need(key && plain_utf8 && out, "null argument")) return s;
  return guarded([&] {
    SubstitutionCipher cipher(key->rep);
    return give_string(utf8_encode(cipher.encrypt(utf8_decode(plain_utf8))), out);
  });
}

cc_status cc_substitution_decrypt(const cc_key* key, const char* cipher_utf8, char** out) {
  if (cc_status s = need(key && cipher_utf8 && out, "null argument")) return s;
  return guarded([&] {
    SubstitutionCipher cipher(key->rep);
    return give_string(utf8_encode(cipher.decrypt(utf8_decode(cipher_utf8))), out);
  });
}

cc_status cc_freq_from_text(const char* text_utf8, cc_freq** out) {
  if (cc_status s = need(text_utf8 && out, "null argument")) return s;
  *out = nullptr;
  return guarded([&] {
    *out = new cc_freq{FrequencyTable::estimate_utf8(text_utf8)};
    return CC_OK;
  });
}

cc_status cc_freq_from_json(const char* json, cc_freq** out) {
  if (cc_status s = need(json && out, "null argument")) return s;
  *out = nullptr;
  return guarded([&] {
    *out = new cc_freq{FrequencyTable::from_json(json)};
    return CC_OK;
  });
}

cc_status cc_freq_to_json(const cc_freq* freq, char** out_json) {
  if (cc_status s = need(freq && out_json, "null argument")) return s;
  return guarded([&] { return give_string(freq->rep.to_json(), out_json); });
}

void cc_freq_free(cc_freq* freq) { delete freq; }

cc_status cc_freq_entropy_bits(const cc_freq* freq, double* out) {
  if (cc_status s = need(freq && out, "null argument")) return s;
  return guarded([&] {
    *out = freq->rep.entropy_bits();
    return CC_OK;
  });
}

cc_status cc_top10_score(const cc_freq* reference, const char* text_utf8, double* out) {
  if (cc_status s = need(reference && text_utf8 && out, "null argument")) return s;
  return guarded([&] {
    *out = top10_score(utf8_decode(text_utf8), reference->rep);
    return CC_OK;
  });
}

cc_status cc_text_entropy_bits(const char* text_utf8, double* out) {
  if (cc_status s = need(text_utf8 && out, "null argument")) return s;
  return guarded([&] {
    Histogram h;
    for (char32_t c : utf8_decode(text_utf8)) h.add(c);
    *out = h.entropy_bits();
    return CC_OK;
  });
}

cc_status cc_block_entropy_csv(const char* cipher_utf8, char** out_csv) {
  if (cc_status s = need(cipher_utf8 && out_csv, "null argument")) return s;
  return guarded([&] {
    return give_string(block_report_csv(ciphertext_block_report(utf8_decode(cipher_utf8))),
                       out_csv);
  });
}

cc_status cc_homophonic_new(const cc_freq* freq, uint32_t space_size, const cc_key* key,
                            int has_seed, uint64_t seed, cc_homophonic** out) {
  if (cc_status s = need(freq && key && out, "null argument")) return s;
  *out = nullptr;
  return guarded([&] {
    BinAllocation alloc = BinAllocation::proportional(freq->rep, space_size);
    Seed rng_key = has_seed ? stream_key(seed, "homophonic-draw") : os_random_key();
    *out = new cc_homophonic{HomophonicCipher(std::move(alloc), key->rep),
                             ChaChaStream(rng_key)};
    return CC_OK;
  });
}

void cc_homophonic_free(cc_homophonic* cipher) { delete cipher; }

cc_status cc_homophonic_allocation_json(const cc_homophonic* cipher, char** out_json) {
  if (cc_status s = need(cipher && out_json, "null argument")) return s;
  return guarded([&] { return give_string(cipher->rep.allocation().to_json(), out_json); });
}

cc_status cc_homophonic_encrypt(cc_homophonic* cipher, const char* plain_utf8, char** out) {
  if (cc_status s = need(cipher && plain_utf8 && out, "null argument")) return s;
  return guarded([&] {
    return give_string(utf8_encode(cipher->rep.encrypt(utf8_decode(plain_utf8), cipher->rng)),
                       out);
  });
}

cc_status cc_homophonic_decrypt(const cc_homophonic* cipher, const char* cipher_utf8,
                                char** out) {
  if (cc_status s = need(cipher && cipher_utf8 && out, "null argument")) return s;
  return guarded([&] {
    return give_string(utf8_encode(cipher->rep.decrypt(utf8_decode(cipher_utf8))), out);
  });
}

cc_status cc_kl_binary(double u, double v, double* out) {
  if (cc_status s = need(out != nullptr, "out is null")) return s;
  return guarded([&] {
    *out = kl_binary(u, v);
    return CC_OK;
  });
}

cc_status cc_crossover(double q0, double q1, double* out) {
  if (cc_status s = need(out != nullptr, "out is null")) return s;
  return guarded([&] {
    *out = crossover_probability(q0, q1);
    return CC_OK;
  });
}

cc_status cc_error_exponent(double q0, double q1, double* out) {
  if (cc_status s = need(out != nullptr, "out is null")) return s;
  return guarded([&] {
    *out = error_exponent(q0, q1);
    return CC_OK;
  });
}

cc_status cc_sample_complexity(double epsilon, double q0, double q1, double* out) {
  if (cc_status s = need(out != nullptr, "out is null")) return s;
  return guarded([&] {
    *out = sample_complexity_bound(epsilon, q0, q1);
    return CC_OK;
  });
}

cc_status cc_complexity_ratio(double p0, double p1, double q0, double q1, double* out) {
  if (cc_status s = need(out != nullptr, "out is null")) return s;
  return guarded([&] {
    *out = complexity_ratio(p0, p1, q0, q1);
    return CC_OK;
  });
}

cc_status cc_map_decide(uint32_t n, uint64_t n_j, double q0, double q1, double prior0,
                        int* decision) {
  if (cc_status s = need(decision != nullptr, "decision is null")) return s;
  return guarded([&] {
    *decision = map_decide(n_j, BinaryChannelSpec{q0, q1, n, prior0});
    return CC_OK;
  });
}

cc_status cc_error_prob(uint32_t n, double q0, double q1, double prior0, int method,
                        uint64_t trials, uint64_t seed, double* p_e, double* ci_lo,
                        double* ci_hi) {
  if (cc_status s = need(p_e != nullptr, "p_e is null")) return s;
  return guarded([&] {
    const BinaryChannelSpec spec{q0, q1, n, prior0};
    ErrorProbEstimate est{};
    switch (method) {
      case 0:
        est = simulate_error_prob(spec, trials, seed);
        break;
      case 1:
        est = simulate_error_prob_tilted(spec, trials, seed);
        break;
      case 2:
        est.p_e = exact_error_prob(spec);
        est.ci_lo = est.ci_hi = est.p_e;
        break;
      default:
        return fail(CC_ERROR_INVALID, "unknown method");
    }
    *p_e = est.p_e;
    if (ci_lo) *ci_lo = est.ci_lo;
    if (ci_hi) *ci_hi = est.ci_hi;
    return CC_OK;
  });
}

cc_status cc_attack_json(const char* cipher_utf8, const cc_freq* reference, uint32_t top_k,
                         char** report_json) {
  if (cc_status s = need(cipher_utf8 && reference && report_json, "null argument")) return s;
  return guarded([&] {
    AttackReport report =
        unigram_attack(utf8_decode(cipher_utf8), reference->rep, top_k == 0 ? 10 : top_k);
    return give_string(report.to_json(), report_json);
  });
}

cc_status cc_simulate_json(uint32_t clients, uint32_t events, uint64_t seed,
                           cc_policy policy, const char* password, const char* context,
                           const cc_freq* score_reference, char** report_json) {
  if (cc_status s = need(password && report_json, "null argument")) return s;
  const auto p = to_policy(policy);
  if (!p) return fail(CC_ERROR_INVALID, "unknown policy");
  return guarded([&] {
    SimulationConfig config;
    config.clients = clients;
    config.events = events;
    config.seed = seed;
    config.policy = *p;
    config.password = password;
    config.context = context ? context : "";
    ConvergenceReport report = simulate_collaboration(
        config, score_reference ? &score_reference->rep : nullptr);
    return give_string(report.to_json(), report_json);
  });
}

cc_status cc_bench_csv(const char* password, cc_policy policy, const uint64_t* sizes,
                       size_t n_sizes, uint32_t reps, uint64_t seed, char** out_csv,
                       double* slope_us_per_char, double* intercept_us, double* r2) {
  if (cc_status s = need(password && sizes && n_sizes > 0, "null argument")) return s;
  const auto p = to_policy(policy);
  if (!p) return fail(CC_ERROR_INVALID, "unknown policy");
  return guarded([&] {
    CipherKey key(password, "");
    std::vector<std::uint64_t> size_vec(sizes, sizes + n_sizes);
    auto rows = bench_middleware(key, *p, size_vec, reps, seed);
    const LinearFit fit = linear_fit(rows);
    if (slope_us_per_char) *slope_us_per_char = fit.slope;
    if (intercept_us) *intercept_us = fit.intercept;
    if (r2) *r2 = fit.r2;
    if (out_csv) return give_string(bench_csv(rows), out_csv);
    return CC_OK;
  });
}

}  // extern "C"

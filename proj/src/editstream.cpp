// SPDX-License-Identifier: Apache-2.0
#include "editstream.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <nlohmann/json.hpp>

#include "alphabet.hpp"
#include "errors.hpp"
#include "utf8.hpp"

namespace collabcipher {

std::string EditEvent::to_json_line() const {
  nlohmann::ordered_json j;
  j["op"] = op;
  j["pos"] = pos;
  if (op == "is") {
    j["s"] = utf8_encode(payload);
  } else if (op == "ds") {
    j["len"] = length;
  }
  j["author"] = author;
  j["rev"] = rev;
  return j.dump();
}

EditEvent EditEvent::from_json_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("event parse error: ") + e.what());
  }
  EditEvent e;
  e.op = j.value("op", std::string{});
  if (e.op.empty()) throw DomainError("event is missing an opcode");
  e.pos = j.value("pos", std::uint64_t{0});
  e.author = j.value("author", std::uint32_t{0});
  e.rev = j.value("rev", std::uint64_t{0});
  if (e.op == "is") {
    if (!j.contains("s")) throw DomainError("insert event is missing its payload");
    e.payload = utf8_decode(j["s"].get<std::string>());
    if (e.payload.empty()) throw DomainError("insert event with empty payload");
  } else if (e.op == "ds") {
    e.length = j.value("len", std::uint64_t{0});
    if (e.length == 0) throw DomainError("delete event with zero length");
  }
  return e;
}

void apply_event(DocumentState& doc, const EditEvent& event) {
  if (event.op == "is") {
    if (event.payload.empty()) throw DomainError("insert event with empty payload");
    if (event.pos > doc.text.size()) {
      throw DomainError("insert position " + std::to_string(event.pos) +
                        " beyond document length " + std::to_string(doc.text.size()));
    }
    doc.text.insert(event.pos, event.payload);
  } else if (event.op == "ds") {
    if (event.length == 0) throw DomainError("delete event with zero length");
    if (event.pos + event.length > doc.text.size()) {
      throw DomainError("delete span [" + std::to_string(event.pos) + ", " +
                        std::to_string(event.pos + event.length) +
                        ") beyond document length " + std::to_string(doc.text.size()));
    }
    doc.text.erase(event.pos, event.length);
  }
  ++doc.revision;
}

EditEvent middleware_outbound(const EditEvent& event, CipherSession& session,
                              TransformStats* stats) {
  EditEvent out = event;
  if (event.op != "is") return out;
  out.payload.clear();
  out.payload.reserve(event.payload.size());
  for (char32_t c : event.payload) {
    if (alphabet::is_plain_char(c)) {
      out.payload.push_back(session.encrypt_char(c));
      if (stats) ++stats->encrypted;
    } else {
      out.payload.push_back(c);
      if (stats) ++stats->passthrough;
    }
  }
  return out;
}

EditEvent middleware_inbound(const EditEvent& event, Decryptor& decryptor,
                             TransformStats* stats) {
  EditEvent out = event;
  if (event.op != "is") return out;
  out.payload.clear();
  out.payload.reserve(event.payload.size());
  for (std::size_t i = 0; i < event.payload.size(); ++i) {
    const char32_t c = event.payload[i];
    if (alphabet::is_usable_cipher(c)) {
      out.payload.push_back(decryptor.decrypt_char(c));
      if (stats) ++stats->encrypted;
    } else if (c < alphabet::kCipherLo || c > alphabet::kCipherHi) {
      // Outside the ciphertext space entirely: a pass-through character.
      out.payload.push_back(c);
      if (stats) ++stats->passthrough;
    } else {
      throw IntegrityError("ciphertext codepoint in the unusable tail at payload index " +
                               std::to_string(i),
                           i);
    }
  }
  return out;
}

void ServerStore::apply(const EditEvent& event) {
  apply_event(ciphertext_doc, event);
  event_log.push_back(event);
}

DocumentState snapshot_decrypt(const ServerStore& store, const CipherKey& key) {
  Decryptor decryptor(key);
  DocumentState out;
  out.revision = store.ciphertext_doc.revision;
  const std::u32string& text = store.ciphertext_doc.text;
  out.text.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    if (alphabet::is_usable_cipher(c)) {
      out.text.push_back(decryptor.decrypt_char(c));
    } else if (c < alphabet::kCipherLo || c > alphabet::kCipherHi) {
      out.text.push_back(c);
    } else {
      throw IntegrityError("corrupt snapshot at offset " + std::to_string(i), i);
    }
  }
  return out;
}

std::uint64_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  const std::size_t n = b.size();
  std::vector<std::uint64_t> row(n + 1);
  for (std::size_t j = 0; j <= n; ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::uint64_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::uint64_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
    }
  }
  return row[n];
}

std::uint64_t levenshtein_bounded(std::u32string_view a, std::u32string_view b,
                                  std::uint64_t cap) {
  if (a.size() < b.size()) std::swap(a, b);
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  if (m - n > cap) return cap + 1;
  const std::uint64_t big = cap + 1;
  std::vector<std::uint64_t> prev(n + 1, big);
  std::vector<std::uint64_t> cur(n + 1, big);
  for (std::size_t j = 0; j <= std::min<std::uint64_t>(n, cap); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    const std::size_t lo = i > cap ? static_cast<std::size_t>(i - cap) : 0;
    const std::size_t hi = std::min<std::uint64_t>(n, i + cap);
    const std::size_t clear_lo = lo == 0 ? 0 : lo - 1;
    const std::size_t clear_hi = std::min(n, hi + 1);
    for (std::size_t j = clear_lo; j <= clear_hi; ++j) cur[j] = big;
    if (lo == 0) cur[0] = std::min<std::uint64_t>(i, big);
    std::uint64_t row_best = lo == 0 ? cur[0] : big;
    for (std::size_t j = std::max<std::size_t>(lo, 1); j <= hi; ++j) {
      std::uint64_t best = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      best = std::min(best, prev[j] + 1);
      best = std::min(best, cur[j - 1] + 1);
      best = std::min(best, big);
      cur[j] = best;
      row_best = std::min(row_best, best);
    }
    if (row_best >= big) return big;
    std::swap(prev, cur);
  }
  return std::min(prev[n], big);
}

std::string ConvergenceReport::to_json() const {
  nlohmann::ordered_json j;
  j["converged"] = converged;
  j["snapshot_matches"] = snapshot_matches;
  j["events_applied"] = events_applied;
  j["quarantined"] = quarantined;
  j["c1_violations"] = c1_violations;
  if (first_divergent_rev) {
    j["first_divergent_rev"] = *first_divergent_rev;
  } else {
    j["first_divergent_rev"] = nullptr;
  }
  j["position_matches"] = position_matches;
  j["guest_top10_score"] = guest_top10_score;
  j["keyed_top10_score"] = keyed_top10_score;
  j["final_length"] = final_length;
  return j.dump(2);
}

namespace {

// Random printable payload, mildly word-shaped so frequency scores mean
// something.
std::u32string random_payload(ChaChaStream& rng, std::uint32_t max_len) {
  static constexpr char kPool[] =
      "etaoinshrdlucmfwygpbvkxjqz      ETAOINSHRD.,'!?;0123456789";
  const std::uint32_t len = 1 + rng.below(max_len);
  std::u32string s;
  s.reserve(len);
  for (std::uint32_t i = 0; i < len; ++i) {
    s.push_back(static_cast<char32_t>(kPool[rng.below(sizeof(kPool) - 1)]));
  }
  return s;
}

}  // namespace

ConvergenceReport simulate_collaboration(
    const SimulationConfig& config, const FrequencyTable* score_reference,
    std::vector<std::pair<std::uint64_t, std::uint64_t>>* timing_us) {
  if (config.clients == 0) throw DomainError("need at least one client");
  CipherKey key(config.password, config.context);

  // Per-client encrypting sessions (greedy state is local by design) plus one
  // decryptor per client for inbound traffic.
  std::vector<CipherSession> sessions;
  std::vector<Decryptor> decryptors;
  std::vector<DocumentState> docs(config.clients);
  sessions.reserve(config.clients);
  decryptors.reserve(config.clients);
  for (std::uint32_t c = 0; c < config.clients; ++c) {
    SessionOptions opt;
    opt.policy = config.policy;
    opt.seed = config.seed * 1315423911ull + c + 1;
    sessions.emplace_back(key, opt);
    decryptors.emplace_back(key);
  }

  ServerStore server;
  ChaChaStream rng(stream_key(config.seed, "simulate-script"));
  ConvergenceReport report;

  DocumentState& reference_doc = docs[0];
  for (std::uint32_t step = 0; step < config.events; ++step) {
    const std::uint32_t author = rng.below(config.clients);
    EditEvent plain_event;
    plain_event.author = author;
    plain_event.rev = step + 1;
    const std::uint64_t len = reference_doc.text.size();
    const bool want_delete =
        len > 0 && (len >= config.target_length || rng.below(5) < 2);
    if (want_delete) {
      plain_event.op = "ds";
      plain_event.length = 1 + rng.below(static_cast<std::uint32_t>(
                                   std::min<std::uint64_t>(config.max_payload, len)));
      plain_event.pos = rng.below(static_cast<std::uint32_t>(len - plain_event.length + 1));
    } else {
      plain_event.op = "is";
      plain_event.pos = len == 0 ? 0 : rng.below(static_cast<std::uint32_t>(len + 1));
      plain_event.payload = random_payload(rng, config.max_payload);
      // Occasionally exercise the pass-through path.
      if (rng.below(50) == 0) plain_event.payload[0] = U'\n';
      if (rng.below(200) == 0) plain_event.payload[0] = U'\U0001F600';
    }

    // Author-side plaintext state before/after, for the c = 1 check.
    const std::u32string plain_before = reference_doc.text;

    const auto t0 = std::chrono::steady_clock::now();
    EditEvent wire = middleware_outbound(plain_event, sessions[author]);
    const auto t1 = std::chrono::steady_clock::now();
    if (timing_us && plain_event.op == "is") {
      timing_us->emplace_back(
          plain_event.payload.size(),
          std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count());
    }

    const std::u32string cipher_before = server.ciphertext_doc.text;
    server.apply(wire);
    ++report.events_applied;

    // Local encodability: the ciphertext document moves by no more edits than
    // the plaintext document.
    DocumentState plain_after_doc{plain_before, 0};
    apply_event(plain_after_doc, plain_event);
    const std::uint64_t edit_size =
        plain_event.op == "is" ? plain_event.payload.size() : plain_event.length;
    const std::uint64_t d_plain =
        levenshtein_bounded(plain_before, plain_after_doc.text, edit_size);
    const std::uint64_t d_cipher =
        levenshtein_bounded(cipher_before, server.ciphertext_doc.text, edit_size);
    if (d_cipher > d_plain) ++report.c1_violations;

    // Broadcast: every client applies the decrypted event.
    for (std::uint32_t c = 0; c < config.clients; ++c) {
      try {
        EditEvent local = middleware_inbound(wire, decryptors[c]);
        apply_event(docs[c], local);
      } catch (const IntegrityError&) {
        ++report.quarantined;
      }
    }
  }

  report.converged = true;
  for (std::uint32_t c = 1; c < config.clients; ++c) {
    if (docs[c].text != docs[0].text) {
      report.converged = false;
      report.first_divergent_rev = docs[c].revision;
      break;
    }
  }

  DocumentState snapshot = snapshot_decrypt(server, key);
  report.snapshot_matches = snapshot.text == docs[0].text;
  report.final_length = docs[0].text.size();

  const std::u32string& plain = docs[0].text;
  const std::u32string& cipher = server.ciphertext_doc.text;
  for (std::size_t i = 0; i < std::min(plain.size(), cipher.size()); ++i) {
    if (alphabet::is_plain_char(plain[i]) && plain[i] == cipher[i]) {
      ++report.position_matches;
    }
  }
  if (score_reference) {
    report.guest_top10_score = top10_score(cipher, *score_reference);
    report.keyed_top10_score = top10_score(plain, *score_reference);
  }
  return report;
}

}  // namespace collabcipher

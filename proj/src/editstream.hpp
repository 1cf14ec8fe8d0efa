// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "block_cipher.hpp"
#include "entropy.hpp"

namespace collabcipher {

/// One collaborative edit. "is" inserts payload at position, "ds" deletes
/// length characters at position; any other opcode passes through untouched.
/// Positions are codepoint offsets.
struct EditEvent {
  std::string op;
  std::uint64_t pos = 0;
  std::u32string payload;    // "is"
  std::uint64_t length = 0;  // "ds"
  std::uint32_t author = 0;
  std::uint64_t rev = 0;

  std::string to_json_line() const;
  static EditEvent from_json_line(std::string_view line);
};

struct DocumentState {
  std::u32string text;
  std::uint64_t revision = 0;
};

/// Splices or deletes; unknown opcodes only bump the revision. Throws
/// DomainError when the event does not fit the current text.
void apply_event(DocumentState& doc, const EditEvent& event);

struct TransformStats {
  std::uint64_t encrypted = 0;
  std::uint64_t passthrough = 0;  // characters sent in the clear, flagged
};

/// Encrypts "is" payload characters; characters outside the 95-character
/// alphabet pass through unchanged and are counted in stats. Everything else
/// about the event is preserved, including payload length.
EditEvent middleware_outbound(const EditEvent& event, CipherSession& session,
                              TransformStats* stats = nullptr);

/// Inverse transform for events arriving from the server. Codepoints outside
/// the usable blocks and the plain alphabet raise IntegrityError (tampering);
/// callers quarantine such events.
EditEvent middleware_inbound(const EditEvent& event, Decryptor& decryptor,
                             TransformStats* stats = nullptr);

/// What the server persists: ciphertext document plus the transformed log.
struct ServerStore {
  DocumentState ciphertext_doc;
  std::vector<EditEvent> event_log;

  void apply(const EditEvent& event);
};

/// Character-wise decryption of the stored ciphertext document. Pass-through
/// characters (outside the usable blocks but also outside the ciphertext
/// space) are kept; anything inside the space but unusable is corruption.
DocumentState snapshot_decrypt(const ServerStore& store, const CipherKey& key);

/// Unit-cost Levenshtein distance (insert / delete / substitute).
std::uint64_t levenshtein(std::u32string_view a, std::u32string_view b);

/// Banded variant: exact while the distance is <= cap, otherwise returns
/// cap + 1. Linear in max(len) * cap.
std::uint64_t levenshtein_bounded(std::u32string_view a, std::u32string_view b,
                                  std::uint64_t cap);

struct SimulationConfig {
  std::uint32_t clients = 3;
  std::uint32_t events = 1000;
  std::uint64_t seed = 0;
  BlockPolicy policy = BlockPolicy::kUniform;
  std::string password;
  std::string context;
  std::uint32_t max_payload = 8;   // longest random insert
  std::uint32_t target_length = 400;  // script keeps documents near this size
};

struct ConvergenceReport {
  bool converged = false;          // all keyed clients agree
  bool snapshot_matches = false;   // server snapshot decrypts to the shared doc
  std::uint64_t events_applied = 0;
  std::uint64_t quarantined = 0;
  std::uint64_t c1_violations = 0;  // per-event local-encodability failures
  std::optional<std::uint64_t> first_divergent_rev;
  std::uint64_t position_matches = 0;  // cipher char == plain char, same spot
  double guest_top10_score = 0.0;
  double keyed_top10_score = 0.0;
  std::uint64_t final_length = 0;

  std::string to_json() const;
};

/// Drives `clients` keyed middleware clients against one serializing server
/// with a seeded random edit script. Checks convergence, snapshot equality,
/// per-event local encodability, and that the server-side text looks nothing
/// like the plaintext.
ConvergenceReport simulate_collaboration(
    const SimulationConfig& config, const FrequencyTable* score_reference = nullptr,
    std::vector<std::pair<std::uint64_t, std::uint64_t>>* timing_us = nullptr);

}  // namespace collabcipher

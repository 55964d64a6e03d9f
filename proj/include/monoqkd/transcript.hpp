#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "monoqkd/strategy.hpp"

namespace monoqkd {

enum class Sender : std::uint8_t { alice, bob, referee };

enum class MsgKind : std::uint8_t {
  basis_reveal_full,  // Step 2: phi and c of one party, one test round
  outcome_reveal,     // Step 2: one party's outcome, one test round
  phi_reveal,         // Step 3: phi only; never carries c
  role_assignment,    // Step 4: referee names the encoding party
  encoded_bit,        // Step 4: chosen party's c plus m = r XOR outcome bit
  abort,              // Step 2 failure
};

// One public classical-channel message. Fields not used by a kind stay at
// their sentinel values and are omitted from the serialized payload.
struct TranscriptMessage {
  Sender sender = Sender::referee;
  MsgKind kind = MsgKind::abort;
  std::int64_t round_id = -1;
  std::int8_t phi_k = -1;    // basis_reveal_full, phi_reveal
  std::int8_t c_k = -1;      // basis_reveal_full, encoded_bit
  std::int8_t outcome = 0;   // outcome_reveal, +-1
  std::int8_t bit = -1;      // encoded_bit: m
  std::int8_t chosen = -1;   // role_assignment: 0 = Alice, 1 = Bob
  std::string reason;        // abort
};

using Transcript = std::vector<TranscriptMessage>;

// Line format: one JSON object per message with fields
// {"sender", "kind", "round_id", "payload"}. Spellings are part of the
// contract: senders "Alice"/"Bob"/"Referee"; kinds "BasisRevealFull",
// "OutcomeReveal", "PhiReveal", "RoleAssignment", "EncodedBit", "Abort";
// payload keys "phi", "c" (grid indices, angle = k*pi/8), "outcome" (+-1),
// "m" (0/1), "chosen" ("Alice"/"Bob"), "reason".
std::string to_line(const TranscriptMessage& m);
TranscriptMessage from_line(const std::string& line);

void write_transcript(std::ostream& out, const Transcript& t);
Transcript read_transcript(std::istream& in);

}  // namespace monoqkd

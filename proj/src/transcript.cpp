#include "monoqkd/transcript.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace monoqkd {

namespace {

const char* sender_name(Sender s) {
  switch (s) {
    case Sender::alice:
      return "Alice";
    case Sender::bob:
      return "Bob";
    default:
      return "Referee";
  }
}

Sender sender_from_name(const std::string& name) {
  if (name == "Alice") return Sender::alice;
  if (name == "Bob") return Sender::bob;
  if (name == "Referee") return Sender::referee;
  throw std::runtime_error("unknown sender: " + name);
}

const char* kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::basis_reveal_full:
      return "BasisRevealFull";
    case MsgKind::outcome_reveal:
      return "OutcomeReveal";
    case MsgKind::phi_reveal:
      return "PhiReveal";
    case MsgKind::role_assignment:
      return "RoleAssignment";
    case MsgKind::encoded_bit:
      return "EncodedBit";
    default:
      return "Abort";
  }
}

MsgKind kind_from_name(const std::string& name) {
  if (name == "BasisRevealFull") return MsgKind::basis_reveal_full;
  if (name == "OutcomeReveal") return MsgKind::outcome_reveal;
  if (name == "PhiReveal") return MsgKind::phi_reveal;
  if (name == "RoleAssignment") return MsgKind::role_assignment;
  if (name == "EncodedBit") return MsgKind::encoded_bit;
  if (name == "Abort") return MsgKind::abort;
  throw std::runtime_error("unknown message kind: " + name);
}

}  // namespace

std::string to_line(const TranscriptMessage& m) {
  nlohmann::json payload = nlohmann::json::object();
  switch (m.kind) {
    case MsgKind::basis_reveal_full:
      payload["phi"] = static_cast<int>(m.phi_k);
      payload["c"] = static_cast<int>(m.c_k);
      break;
    case MsgKind::outcome_reveal:
      payload["outcome"] = static_cast<int>(m.outcome);
      break;
    case MsgKind::phi_reveal:
      payload["phi"] = static_cast<int>(m.phi_k);
      break;
    case MsgKind::role_assignment:
      payload["chosen"] = m.chosen == 0 ? "Alice" : "Bob";
      break;
    case MsgKind::encoded_bit:
      payload["c"] = static_cast<int>(m.c_k);
      payload["m"] = static_cast<int>(m.bit);
      break;
    case MsgKind::abort:
      payload["reason"] = m.reason;
      break;
  }
  nlohmann::json j{{"sender", sender_name(m.sender)},
                   {"kind", kind_name(m.kind)},
                   {"round_id", m.round_id},
                   {"payload", std::move(payload)}};
  return j.dump();
}

TranscriptMessage from_line(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  TranscriptMessage m;
  m.sender = sender_from_name(j.at("sender").get<std::string>());
  m.kind = kind_from_name(j.at("kind").get<std::string>());
  m.round_id = j.at("round_id").get<std::int64_t>();
  const auto& payload = j.at("payload");
  switch (m.kind) {
    case MsgKind::basis_reveal_full:
      m.phi_k = static_cast<std::int8_t>(payload.at("phi").get<int>());
      m.c_k = static_cast<std::int8_t>(payload.at("c").get<int>());
      break;
    case MsgKind::outcome_reveal:
      m.outcome = static_cast<std::int8_t>(payload.at("outcome").get<int>());
      break;
    case MsgKind::phi_reveal:
      m.phi_k = static_cast<std::int8_t>(payload.at("phi").get<int>());
      break;
    case MsgKind::role_assignment:
      m.chosen = payload.at("chosen").get<std::string>() == "Alice" ? 0 : 1;
      break;
    case MsgKind::encoded_bit:
      m.c_k = static_cast<std::int8_t>(payload.at("c").get<int>());
      m.bit = static_cast<std::int8_t>(payload.at("m").get<int>());
      break;
    case MsgKind::abort:
      m.reason = payload.at("reason").get<std::string>();
      break;
  }
  return m;
}

void write_transcript(std::ostream& out, const Transcript& t) {
  for (const auto& m : t) out << to_line(m) << '\n';
}

Transcript read_transcript(std::istream& in) {
  Transcript t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) t.push_back(from_line(line));
  }
  return t;
}

}  // namespace monoqkd

#include "monoqkd/protocol.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace monoqkd {

void ProtocolConfig::validate() const {
  if (n_rounds < 0) throw ConfigError("n_rounds must be >= 0");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0, 1)");
  }
  if (key_block_size < 1) throw ConfigError("K must be >= 1");
  if (!(chsh_tolerance > 0.0)) throw ConfigError("chsh_tolerance must be > 0");
  if (correlation_tolerance < 0.0) {
    throw ConfigError("correlation_tolerance must be >= 0");
  }
  if (min_cell_samples < 1) throw ConfigError("min_cell_samples must be >= 1");
  if (static_cast<double>(n_rounds) * (1.0 - test_fraction) < key_block_size) {
    throw ConfigError("n_rounds * (1 - test_fraction) must be >= K");
  }
}

namespace {

MeasurementBasis draw_basis(RandomStream& rng) {
  MeasurementBasis b;
  b.phi_k = static_cast<int>(rng.next_below(5));
  b.c_k = rng.next_bit() ? 4 : 0;
  return b;
}

}  // namespace

std::vector<RoundRecord> run_measurement_phase(const ProtocolConfig& config,
                                               const HVEnsemble* source,
                                               StreamSet& streams) {
  std::vector<RoundRecord> records;
  records.reserve(static_cast<std::size_t>(config.n_rounds));
  auto& alice_rng = streams.get(StreamId::alice_bases);
  auto& bob_rng = streams.get(StreamId::bob_bases);
  auto& quantum_rng = streams.get(StreamId::quantum_sampling);
  auto& lambda_rng = streams.get(StreamId::lambda_draws);

  for (std::int64_t i = 0; i < config.n_rounds; ++i) {
    RoundRecord rec;
    rec.round_id = i;
    rec.basis_a = draw_basis(alice_rng);
    rec.basis_b = draw_basis(bob_rng);
    const int at = rec.basis_a.total_k();
    const int bt = rec.basis_b.total_k();
    if (source == nullptr) {
      auto dist = singlet_distribution(GridAngle{at}, GridAngle{bt});
      auto [oa, ob] = sample_joint(dist, quantum_rng);
      rec.outcome_a = oa;
      rec.outcome_b = ob;
    } else {
      std::size_t idx = draw_strategy_index(*source, lambda_rng);
      const auto& s = source->entries[idx].strategy;
      rec.outcome_a = s.outcome_a(at, bt);
      rec.outcome_b = s.outcome_b(at, bt);
      rec.lambda_index = static_cast<std::int32_t>(idx);
    }
    records.push_back(rec);
  }
  return records;
}

void select_test_rounds(std::vector<RoundRecord>& records,
                        double test_fraction, RandomStream& rng) {
  for (auto& rec : records) {
    rec.phase = rng.bernoulli(test_fraction) ? PhaseTag::test : PhaseTag::key;
  }
}

namespace {

struct CellStats {
  std::int64_t n = 0;
  std::int64_t product_sum = 0;
};

}  // namespace

EstimationResult parameter_estimation(const std::vector<RoundRecord>& records,
                                      const ChshSetting& setting,
                                      const ProtocolConfig& config) {
  CellStats cells[kGridSize][kGridSize] = {};
  for (const auto& rec : records) {
    if (rec.phase != PhaseTag::test) continue;
    auto& cell = cells[rec.basis_a.total_k()][rec.basis_b.total_k()];
    cell.n += 1;
    cell.product_sum += sign_of(rec.outcome_a) * sign_of(rec.outcome_b);
  }

  auto require = [&](int ta, int tb) -> const CellStats& {
    const auto& cell = cells[ta][tb];
    if (cell.n < config.min_cell_samples) {
      throw InsufficientDataError("cell (a=" + std::to_string(ta) +
                                  ", b=" + std::to_string(tb) + ") has " +
                                  std::to_string(cell.n) + " test rounds");
    }
    return cell;
  };

  EstimationResult result;
  const std::array<std::pair<int, int>, 4> chsh_cells{
      {{setting.a1.k, setting.b1.k},
       {setting.a1.k, setting.b2.k},
       {setting.a2.k, setting.b1.k},
       {setting.a2.k, setting.b2.k}}};
  for (int i = 0; i < 4; ++i) {
    const auto& cell = require(chsh_cells[i].first, chsh_cells[i].second);
    result.chsh_cell_counts[i] = cell.n;
    result.chsh_estimate += setting.signs[i] * static_cast<double>(cell.product_sum) /
                            static_cast<double>(cell.n);
  }

  auto add_check = [&](int ta, int tb, bool same_basis) {
    const auto& cell = require(ta, tb);
    CorrelationCheck check;
    check.total_a = ta;
    check.total_b = tb;
    check.n = cell.n;
    check.empirical =
        static_cast<double>(cell.product_sum) / static_cast<double>(cell.n);
    check.same_basis = same_basis;
    check.ok = same_basis
                   ? check.empirical <= -1.0 + config.correlation_tolerance
                   : check.empirical >= 1.0 - config.correlation_tolerance;
    result.correlation_checks.push_back(check);
  };
  for (int t = 0; t < kGridSize; ++t) add_check(t, t, true);
  for (int t = 0; t + 4 < kGridSize; ++t) {
    add_check(t, t + 4, false);
    add_check(t + 4, t, false);
  }

  const double target = 2.0 * std::numbers::sqrt2;
  bool chsh_ok =
      std::abs(std::abs(result.chsh_estimate) - target) <= config.chsh_tolerance;
  bool correlations_ok = true;
  for (const auto& check : result.correlation_checks) {
    correlations_ok = correlations_ok && check.ok;
  }
  result.abort = !(chsh_ok && correlations_ok);
  return result;
}

int encode_round(Outcome own_outcome, int r) { return r ^ to_bit(own_outcome); }

std::optional<int> decode_round(Outcome own_outcome, int own_total_k,
                                int partner_total_k, int m) {
  const int diff = own_total_k - partner_total_k;
  Outcome partner;
  if (diff == 0) {
    partner = opposite(own_outcome);
  } else if (diff == 4 || diff == -4) {
    partner = own_outcome;
  } else {
    return std::nullopt;
  }
  return m ^ to_bit(partner);
}

std::vector<Party> assign_roles(std::size_t n_key_rounds, RandomStream& rng) {
  std::vector<Party> roles(n_key_rounds);
  for (auto& role : roles) {
    role = rng.next_bit() ? Party::bob : Party::alice;
  }
  return roles;
}

std::vector<KeyBlock> distill_key(const std::vector<int>& bits,
                                  const std::vector<std::int64_t>& round_ids,
                                  int block_size) {
  if (block_size < 1) throw ConfigError("block size must be >= 1");
  if (bits.size() != round_ids.size()) {
    throw ConfigError("bits and round ids must have equal length");
  }
  if (bits.size() < static_cast<std::size_t>(block_size)) {
    throw InsufficientBitsError("fewer than K decoded bits available");
  }
  std::vector<KeyBlock> blocks;
  const std::size_t n_blocks = bits.size() / static_cast<std::size_t>(block_size);
  blocks.reserve(n_blocks);
  for (std::size_t blk = 0; blk < n_blocks; ++blk) {
    KeyBlock block;
    int parity = 0;
    for (int j = 0; j < block_size; ++j) {
      const std::size_t i = blk * static_cast<std::size_t>(block_size) +
                            static_cast<std::size_t>(j);
      block.bits.push_back(bits[i]);
      block.round_ids.push_back(round_ids[i]);
      parity ^= bits[i];
    }
    block.key_bit = parity;
    blocks.push_back(std::move(block));
  }
  return blocks;
}

namespace {

void emit_test_round(Transcript& t, const RoundRecord& rec) {
  t.push_back({Sender::alice, MsgKind::basis_reveal_full, rec.round_id,
               static_cast<std::int8_t>(rec.basis_a.phi_k),
               static_cast<std::int8_t>(rec.basis_a.c_k), 0, -1, -1, {}});
  t.push_back({Sender::bob, MsgKind::basis_reveal_full, rec.round_id,
               static_cast<std::int8_t>(rec.basis_b.phi_k),
               static_cast<std::int8_t>(rec.basis_b.c_k), 0, -1, -1, {}});
  t.push_back({Sender::alice, MsgKind::outcome_reveal, rec.round_id, -1, -1,
               static_cast<std::int8_t>(sign_of(rec.outcome_a)), -1, -1, {}});
  t.push_back({Sender::bob, MsgKind::outcome_reveal, rec.round_id, -1, -1,
               static_cast<std::int8_t>(sign_of(rec.outcome_b)), -1, -1, {}});
}

}  // namespace

ProtocolResult run_protocol(const ProtocolConfig& config,
                            const HVEnsemble* source) {
  config.validate();
  StreamSet streams(config.seed);

  ProtocolResult result;
  result.records = run_measurement_phase(config, source, streams);
  select_test_rounds(result.records, config.test_fraction,
                     streams.get(StreamId::round_selection));

  if (config.record_transcript) {
    for (const auto& rec : result.records) {
      if (rec.phase == PhaseTag::test) emit_test_round(result.transcript, rec);
    }
  }

  result.estimation =
      parameter_estimation(result.records, ChshSetting::canonical(), config);
  if (result.estimation.abort) {
    result.aborted = true;
    if (config.record_transcript) {
      TranscriptMessage msg;
      msg.sender = Sender::referee;
      msg.kind = MsgKind::abort;
      msg.reason = "parameter estimation outside tolerances";
      result.transcript.push_back(std::move(msg));
    }
    return result;
  }

  // Steps 3-4 over the Key rounds, in round order.
  std::vector<std::size_t> key_indices;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    if (result.records[i].phase == PhaseTag::key) key_indices.push_back(i);
  }
  auto roles =
      assign_roles(key_indices.size(), streams.get(StreamId::role_selection));
  auto& bit_rng = streams.get(StreamId::random_bits);

  std::vector<int> alice_bits, bob_bits;
  std::vector<std::int64_t> shared_round_ids;
  result.key_rounds.reserve(key_indices.size());

  for (std::size_t i = 0; i < key_indices.size(); ++i) {
    auto& rec = result.records[key_indices[i]];
    if (config.record_transcript) {
      result.transcript.push_back({Sender::alice, MsgKind::phi_reveal,
                                   rec.round_id,
                                   static_cast<std::int8_t>(rec.basis_a.phi_k),
                                   -1, 0, -1, -1, {}});
      result.transcript.push_back({Sender::bob, MsgKind::phi_reveal,
                                   rec.round_id,
                                   static_cast<std::int8_t>(rec.basis_b.phi_k),
                                   -1, 0, -1, -1, {}});
    }

    KeyRoundInfo info;
    info.round_id = rec.round_id;
    info.chosen = roles[i];
    info.r = bit_rng.next_bit();

    const bool alice_encodes = info.chosen == Party::alice;
    const MeasurementBasis& enc_basis = alice_encodes ? rec.basis_a : rec.basis_b;
    const Outcome enc_outcome = alice_encodes ? rec.outcome_a : rec.outcome_b;
    const MeasurementBasis& dec_basis = alice_encodes ? rec.basis_b : rec.basis_a;
    const Outcome dec_outcome = alice_encodes ? rec.outcome_b : rec.outcome_a;

    info.m = encode_round(enc_outcome, info.r);
    if (config.record_transcript) {
      result.transcript.push_back(
          {Sender::referee, MsgKind::role_assignment, rec.round_id, -1, -1, 0,
           -1, static_cast<std::int8_t>(alice_encodes ? 0 : 1), {}});
      result.transcript.push_back(
          {alice_encodes ? Sender::alice : Sender::bob, MsgKind::encoded_bit,
           rec.round_id, -1, static_cast<std::int8_t>(enc_basis.c_k), 0,
           static_cast<std::int8_t>(info.m), -1, {}});
    }

    auto decoded = decode_round(dec_outcome, dec_basis.total_k(),
                                enc_basis.total_k(), info.m);
    if (decoded.has_value()) {
      info.decodable = true;
      info.decoded_r = *decoded;
      alice_bits.push_back(alice_encodes ? info.r : info.decoded_r);
      bob_bits.push_back(alice_encodes ? info.decoded_r : info.r);
      shared_round_ids.push_back(rec.round_id);
    } else {
      rec.phase = PhaseTag::discarded;
    }
    result.key_rounds.push_back(info);
  }

  result.alice_blocks =
      distill_key(alice_bits, shared_round_ids, config.key_block_size);
  result.bob_blocks =
      distill_key(bob_bits, shared_round_ids, config.key_block_size);
  return result;
}

}  // namespace monoqkd

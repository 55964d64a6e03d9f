#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "monoqkd/grid.hpp"
#include "monoqkd/quantum.hpp"
#include "monoqkd/strategy.hpp"
#include "monoqkd/transcript.hpp"

namespace monoqkd {

enum class PhaseTag : std::uint8_t { unassigned, test, key, discarded };

struct RoundRecord {
  std::int64_t round_id = 0;
  MeasurementBasis basis_a;
  MeasurementBasis basis_b;
  Outcome outcome_a = Outcome::plus;
  Outcome outcome_b = Outcome::plus;
  PhaseTag phase = PhaseTag::unassigned;
  // Source side channel for the security analysis; -1 for the ideal source.
  // Never read by Alice/Bob protocol logic.
  std::int32_t lambda_index = -1;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientBitsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProtocolConfig {
  std::uint64_t seed = 1;
  std::int64_t n_rounds = 0;
  double test_fraction = 0.5;
  int key_block_size = 20;  // K
  double chsh_tolerance = 0.05;
  double correlation_tolerance = 0.0;
  std::int64_t min_cell_samples = 10;
  bool record_transcript = true;

  void validate() const;  // throws ConfigError
};

struct CorrelationCheck {
  int total_a = 0;
  int total_b = 0;
  std::int64_t n = 0;
  double empirical = 0.0;
  bool same_basis = false;  // else quarter-turn pair
  bool ok = false;
};

struct EstimationResult {
  double chsh_estimate = 0.0;
  std::array<std::int64_t, 4> chsh_cell_counts{};
  std::vector<CorrelationCheck> correlation_checks;
  bool abort = false;
};

struct KeyBlock {
  std::vector<std::int64_t> round_ids;
  std::vector<int> bits;  // the shared random bits r
  int key_bit = 0;        // XOR over bits
};

// Step 3-4 artifacts of one Key-tagged round.
struct KeyRoundInfo {
  std::int64_t round_id = 0;
  Party chosen = Party::alice;
  int r = -1;          // encoder's random bit (ground truth)
  int m = -1;          // masked bit on the wire
  bool decodable = false;
  int decoded_r = -1;  // decoder's result, valid iff decodable
};

struct ProtocolResult {
  std::vector<RoundRecord> records;
  Transcript transcript;
  EstimationResult estimation;
  bool aborted = false;
  std::vector<KeyRoundInfo> key_rounds;
  std::vector<KeyBlock> alice_blocks;
  std::vector<KeyBlock> bob_blocks;
};

// Step 1: both parties draw uniform independent (phi, c) per round; outcomes
// come from the singlet statistics (source == nullptr) or a hidden-variable
// strategy drawn per round from the ensemble.
std::vector<RoundRecord> run_measurement_phase(const ProtocolConfig& config,
                                               const HVEnsemble* source,
                                               StreamSet& streams);

// Step 2 selection: each round independently tagged Test with probability
// test_fraction, the rest Key.
void select_test_rounds(std::vector<RoundRecord>& records,
                        double test_fraction, RandomStream& rng);

// Step 2 estimation over Test rounds: CHSH from the four setting cells, plus
// perfect-(anti)correlation checks on every same-basis and quarter-turn
// total-angle cell. Throws InsufficientDataError if a required cell has
// fewer than min_cell_samples rounds.
EstimationResult parameter_estimation(const std::vector<RoundRecord>& records,
                                      const ChshSetting& setting,
                                      const ProtocolConfig& config);

// Step 4: m = r XOR bit(outcome).
int encode_round(Outcome own_outcome, int r);

// Step 4 decode from the decoder's side: equal total angles mean the partner
// outcome is the opposite of the decoder's, a quarter-turn apart means it is
// equal. Any other separation is undecodable and yields nullopt (the round
// is discarded, not an error).
std::optional<int> decode_round(Outcome own_outcome, int own_total_k,
                                int partner_total_k, int m);

// Step 4: uniform encoder choice per key round.
std::vector<Party> assign_roles(std::size_t n_key_rounds, RandomStream& rng);

// Step 5: consecutive disjoint blocks of K bits, key bit = XOR over block;
// leftovers are dropped. Throws InsufficientBitsError when fewer than K bits
// exist in total.
std::vector<KeyBlock> distill_key(const std::vector<int>& bits,
                                  const std::vector<std::int64_t>& round_ids,
                                  int block_size);

// Steps 1-5 end to end against the canonical CHSH setting. On abort the
// result carries the estimation and an Abort transcript message and no key
// material.
ProtocolResult run_protocol(const ProtocolConfig& config,
                            const HVEnsemble* source);

}  // namespace monoqkd

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "monoqkd/protocol.hpp"

namespace monoqkd {

// Everything Eve holds about one key round: the hidden-variable side channel
// (when the source leaks one) plus the public transcript of Steps 3-4. The
// non-chosen party's c has no field here; its absence is structural.
struct EveView {
  const HVStrategy* strategy = nullptr;  // nullptr: no lambda side channel
  int phi_a_k = 0;
  int phi_b_k = 0;
  Party chosen = Party::alice;
  int chosen_c_k = 0;
  int m = 0;
};

struct EveVerdict {
  bool known = false;
  int r = -1;      // decoded bit, valid iff known
  int guess = -1;  // equals r when known, uniform candidate otherwise
};

struct EveRoundResult {
  EveVerdict verdict;
  int r_actual = -1;
  bool has_lambda = false;
  LocalityClass lambda_class = LocalityClass::local;
};

// Evaluates the chosen party's outcome function at both candidate values of
// the hidden party's c. Agreement means Eve decodes with certainty;
// disagreement leaves her with a uniform guess between the two candidates.
EveVerdict eve_decode(const EveView& view, RandomStream& guess_rng);

// Fraction of Known verdicts.
double empirical_certainty(std::span<const EveRoundResult> results);

struct ExposureStats {
  std::int64_t n_blocks = 0;
  double exposure_empirical = 0.0;  // fraction of blocks fully Known
  double exposure_theory = 0.0;     // ((3 - sqrt 2) / 2)^K
  double eve_guess_rate = 0.0;      // Eve's key-bit hit rate, guessing unknowns
};

// Blocks are consecutive groups of K results, mirroring key distillation.
// actual_key_bits are the distilled key bits, one per block.
ExposureStats key_exposure(std::span<const EveRoundResult> results,
                           std::span<const int> actual_key_bits, int block_size);

double certainty_theory();             // (3 - sqrt 2) / 2
double key_exposure_theory(int block_size);

// Indices of results whose Known verdict disagrees with the ground truth.
// Always empty for a deterministic source.
std::vector<std::size_t> certainty_soundness_audit(
    std::span<const EveRoundResult> results);

struct ClassRates {
  std::int64_t local_rounds = 0;
  std::int64_t nonlocal_rounds = 0;
  double local_certainty = 0.0;
  double nonlocal_certainty = 0.0;
};

struct SecurityReport {
  std::int64_t n_key_rounds = 0;  // decodable key rounds analyzed
  bool lambda_channel = false;
  double p_empirical = 0.0;  // meaningful iff lambda_channel
  double p_theory = 0.0;
  ClassRates class_rates;    // meaningful iff lambda_channel
  ExposureStats exposure;
  std::int64_t soundness_counterexamples = 0;
};

// Replays Eve against a completed protocol run. source supplies the lambda
// side channel and may be nullptr (monogamy contract: no leak, every round
// Unknown). Only decodable key rounds, i.e. the rounds that enter key
// blocks, are analyzed.
SecurityReport analyze_security(const ProtocolResult& run,
                                const HVEnsemble* source, int block_size,
                                RandomStream& guess_rng);

}  // namespace monoqkd

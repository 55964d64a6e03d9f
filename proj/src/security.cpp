#include "monoqkd/security.hpp"

#include <cmath>
#include <numbers>

namespace monoqkd {

double certainty_theory() { return (3.0 - std::numbers::sqrt2) / 2.0; }

double key_exposure_theory(int block_size) {
  return std::pow(certainty_theory(), block_size);
}

EveVerdict eve_decode(const EveView& view, RandomStream& guess_rng) {
  EveVerdict verdict;
  if (view.strategy == nullptr) {
    // Monogamy contract: nothing beyond the transcript, and the hidden c
    // makes the outcome a coin flip from Eve's point of view.
    verdict.known = false;
    verdict.guess = guess_rng.next_bit();
    return verdict;
  }

  const bool alice_chosen = view.chosen == Party::alice;
  const int chosen_total =
      (alice_chosen ? view.phi_a_k : view.phi_b_k) + view.chosen_c_k;
  const int hidden_phi = alice_chosen ? view.phi_b_k : view.phi_a_k;

  Outcome candidates[2];
  for (int i = 0; i < 2; ++i) {
    const int hidden_total = hidden_phi + 4 * i;
    candidates[i] = alice_chosen
                        ? view.strategy->outcome_a(chosen_total, hidden_total)
                        : view.strategy->outcome_b(hidden_total, chosen_total);
  }

  if (candidates[0] == candidates[1]) {
    verdict.known = true;
    verdict.r = view.m ^ to_bit(candidates[0]);
    verdict.guess = verdict.r;
  } else {
    verdict.known = false;
    verdict.guess = view.m ^ to_bit(candidates[guess_rng.next_bit()]);
  }
  return verdict;
}

double empirical_certainty(std::span<const EveRoundResult> results) {
  if (results.empty()) return 0.0;
  std::int64_t known = 0;
  for (const auto& r : results) known += r.verdict.known ? 1 : 0;
  return static_cast<double>(known) / static_cast<double>(results.size());
}

ExposureStats key_exposure(std::span<const EveRoundResult> results,
                           std::span<const int> actual_key_bits,
                           int block_size) {
  ExposureStats stats;
  stats.exposure_theory = key_exposure_theory(block_size);
  stats.n_blocks = static_cast<std::int64_t>(actual_key_bits.size());
  if (stats.n_blocks == 0) return stats;

  std::int64_t fully_known = 0;
  std::int64_t guessed_right = 0;
  for (std::int64_t blk = 0; blk < stats.n_blocks; ++blk) {
    bool all_known = true;
    int guess_parity = 0;
    for (int j = 0; j < block_size; ++j) {
      const auto& r = results[static_cast<std::size_t>(blk) * block_size + j];
      all_known = all_known && r.verdict.known;
      guess_parity ^= r.verdict.guess;
    }
    fully_known += all_known ? 1 : 0;
    guessed_right += guess_parity == actual_key_bits[blk] ? 1 : 0;
  }
  stats.exposure_empirical =
      static_cast<double>(fully_known) / static_cast<double>(stats.n_blocks);
  stats.eve_guess_rate =
      static_cast<double>(guessed_right) / static_cast<double>(stats.n_blocks);
  return stats;
}

std::vector<std::size_t> certainty_soundness_audit(
    std::span<const EveRoundResult> results) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].verdict.known && results[i].verdict.r != results[i].r_actual) {
      bad.push_back(i);
    }
  }
  return bad;
}

SecurityReport analyze_security(const ProtocolResult& run,
                                const HVEnsemble* source, int block_size,
                                RandomStream& guess_rng) {
  std::vector<LocalityClass> classes;
  if (source != nullptr) {
    classes.reserve(source->entries.size());
    for (const auto& entry : source->entries) {
      classes.push_back(classify(entry.strategy));
    }
  }

  std::vector<EveRoundResult> results;
  results.reserve(run.key_rounds.size());
  for (const auto& info : run.key_rounds) {
    if (!info.decodable) continue;
    const auto& rec = run.records[static_cast<std::size_t>(info.round_id)];

    EveView view;
    view.phi_a_k = rec.basis_a.phi_k;
    view.phi_b_k = rec.basis_b.phi_k;
    view.chosen = info.chosen;
    view.chosen_c_k =
        info.chosen == Party::alice ? rec.basis_a.c_k : rec.basis_b.c_k;
    view.m = info.m;
    if (source != nullptr && rec.lambda_index >= 0) {
      view.strategy = &source->entries[rec.lambda_index].strategy;
    }

    EveRoundResult result;
    result.verdict = eve_decode(view, guess_rng);
    result.r_actual = info.r;
    result.has_lambda = view.strategy != nullptr;
    if (view.strategy != nullptr) {
      result.lambda_class = classes[static_cast<std::size_t>(rec.lambda_index)];
    }
    results.push_back(result);
  }

  SecurityReport report;
  report.n_key_rounds = static_cast<std::int64_t>(results.size());
  report.lambda_channel = source != nullptr;
  report.p_theory = certainty_theory();
  report.p_empirical = empirical_certainty(results);
  report.soundness_counterexamples =
      static_cast<std::int64_t>(certainty_soundness_audit(results).size());

  if (report.lambda_channel) {
    std::int64_t local_known = 0, nonlocal_known = 0;
    for (const auto& r : results) {
      if (r.lambda_class == LocalityClass::local) {
        report.class_rates.local_rounds += 1;
        local_known += r.verdict.known ? 1 : 0;
      } else {
        report.class_rates.nonlocal_rounds += 1;
        nonlocal_known += r.verdict.known ? 1 : 0;
      }
    }
    if (report.class_rates.local_rounds > 0) {
      report.class_rates.local_certainty =
          static_cast<double>(local_known) /
          static_cast<double>(report.class_rates.local_rounds);
    }
    if (report.class_rates.nonlocal_rounds > 0) {
      report.class_rates.nonlocal_certainty =
          static_cast<double>(nonlocal_known) /
          static_cast<double>(report.class_rates.nonlocal_rounds);
    }
  }

  std::vector<int> key_bits;
  key_bits.reserve(run.alice_blocks.size());
  for (const auto& block : run.alice_blocks) key_bits.push_back(block.key_bit);
  report.exposure = key_exposure(results, key_bits, block_size);
  return report;
}

}  // namespace monoqkd

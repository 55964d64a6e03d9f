#include "monoqkd/harness.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "monoqkd/ensemble_io.hpp"

namespace monoqkd {

const char* adversary_name(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::none:
      return "none";
    case AdversaryKind::local_only:
      return "local_only";
    case AdversaryKind::critical:
      return "critical";
    default:
      return "custom";
  }
}

AdversaryKind adversary_from_name(const std::string& name) {
  if (name == "none") return AdversaryKind::none;
  if (name == "local_only") return AdversaryKind::local_only;
  if (name == "critical") return AdversaryKind::critical;
  if (name == "custom") return AdversaryKind::custom;
  throw ConfigError("unknown adversary kind: " + name);
}

void RunSpec::validate() const {
  config.validate();
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (adversary == AdversaryKind::custom && ensemble_path.empty()) {
    throw ConfigError("custom adversary requires an ensemble path");
  }
}

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::completed:
      return 0;
    case RunStatus::aborted_by_protocol:
      return 2;
    default:
      return 1;
  }
}

std::string resolve_output_path(const std::string& path) {
  const char* dir = std::getenv("MONOQKD_OUTPUT_DIR");
  if (dir == nullptr || path.empty() ||
      std::filesystem::path(path).is_absolute()) {
    return path;
  }
  return (std::filesystem::path(dir) / path).string();
}

namespace {

nlohmann::json spec_to_json(const RunSpec& spec) {
  return {{"seed", spec.config.seed},
          {"rounds", spec.config.n_rounds},
          {"test_fraction", spec.config.test_fraction},
          {"K", spec.config.key_block_size},
          {"chsh_tolerance", spec.config.chsh_tolerance},
          {"correlation_tolerance", spec.config.correlation_tolerance},
          {"min_cell_samples", spec.config.min_cell_samples},
          {"adversary", adversary_name(spec.adversary)},
          {"ensemble", spec.ensemble_path},
          {"transcript", spec.transcript_path},
          {"repetitions", spec.repetitions}};
}

nlohmann::json security_to_json(const SecurityReport& report) {
  nlohmann::json j{{"n_key_rounds", report.n_key_rounds},
                   {"lambda_channel", report.lambda_channel},
                   {"n_blocks", report.exposure.n_blocks},
                   {"P_theory", report.exposure.exposure_theory},
                   {"eve_guess_rate", report.exposure.eve_guess_rate},
                   {"soundness_counterexamples",
                    report.soundness_counterexamples}};
  if (report.lambda_channel) {
    // p and P are per-round / per-block certainty rates; they exist only
    // when the source leaks a lambda channel.
    j["p_empirical"] = report.p_empirical;
    j["p_theory"] = report.p_theory;
    j["P_empirical"] = report.exposure.exposure_empirical;
    j["local_rounds"] = report.class_rates.local_rounds;
    j["nonlocal_rounds"] = report.class_rates.nonlocal_rounds;
    j["local_certainty"] = report.class_rates.local_certainty;
    j["nonlocal_certainty"] = report.class_rates.nonlocal_certainty;
  }
  return j;
}

std::int64_t block_mismatches(const ProtocolResult& run) {
  std::int64_t mismatches = 0;
  for (std::size_t i = 0; i < run.alice_blocks.size(); ++i) {
    if (run.alice_blocks[i].key_bit != run.bob_blocks[i].key_bit) ++mismatches;
  }
  return mismatches;
}

}  // namespace

RunOutcome run(const RunSpec& spec) {
  RunOutcome outcome;
  try {
    spec.validate();

    const HVEnsemble* source = nullptr;
    HVEnsemble ensemble;
    switch (spec.adversary) {
      case AdversaryKind::none:
        break;
      case AdversaryKind::local_only:
        ensemble = local_only_ensemble();
        source = &ensemble;
        break;
      case AdversaryKind::critical:
        ensemble = critical_ensemble();
        source = &ensemble;
        break;
      case AdversaryKind::custom: {
        ensemble = load_ensemble(spec.ensemble_path);
        auto problems = validate_ensemble(ensemble);
        if (!problems.empty()) {
          throw ConfigError("invalid ensemble: " + problems.front());
        }
        source = &ensemble;
        break;
      }
    }

    nlohmann::json reps = nlohmann::json::array();
    int aborted_count = 0;
    for (int i = 0; i < spec.repetitions; ++i) {
      ProtocolConfig cfg = spec.config;
      cfg.seed = i == 0 ? spec.config.seed : derive_seed(spec.config.seed, i);

      ProtocolResult result = run_protocol(cfg, source);
      nlohmann::json rep{{"seed", cfg.seed},
                         {"status", result.aborted ? "aborted" : "completed"},
                         {"chsh_estimate", result.estimation.chsh_estimate}};
      if (result.aborted) {
        ++aborted_count;
      } else {
        rep["key"] = {{"n_blocks", result.alice_blocks.size()},
                      {"block_mismatches", block_mismatches(result)}};
        RandomStream guess_rng(cfg.seed,
                               static_cast<std::uint32_t>(StreamId::eve_guess));
        auto report =
            analyze_security(result, source, cfg.key_block_size, guess_rng);
        rep["security"] = security_to_json(report);
      }
      reps.push_back(std::move(rep));

      if (i == 0 && !spec.transcript_path.empty()) {
        std::ofstream out(resolve_output_path(spec.transcript_path));
        if (!out) throw ConfigError("cannot write transcript file");
        write_transcript(out, result.transcript);
      }
    }

    outcome.status = aborted_count == spec.repetitions
                         ? RunStatus::aborted_by_protocol
                         : RunStatus::completed;
    outcome.report = {
        {"spec", spec_to_json(spec)},
        {"status", outcome.status == RunStatus::completed
                       ? "completed"
                       : "aborted-by-protocol"},
        {"repetitions", std::move(reps)},
        {"aggregate",
         {{"completed", spec.repetitions - aborted_count},
          {"aborted", aborted_count},
          {"abort_rate", static_cast<double>(aborted_count) /
                             static_cast<double>(spec.repetitions)}}}};

    if (!spec.report_path.empty() && spec.report_path != "-") {
      std::ofstream out(resolve_output_path(spec.report_path));
      if (!out) throw ConfigError("cannot write report file");
      out << outcome.report.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    outcome.status = RunStatus::configuration_error;
    outcome.report = {{"status", "configuration-error"}, {"error", e.what()}};
  }
  return outcome;
}

nlohmann::json validate_ensemble_file(const std::string& path) {
  HVEnsemble ensemble = load_ensemble(path);
  auto problems = validate_ensemble(ensemble);

  const auto setting = ChshSetting::canonical();
  nlohmann::json strategies = nlohmann::json::array();
  double weight_sum = 0.0;
  for (const auto& entry : ensemble.entries) {
    weight_sum += entry.weight;
    strategies.push_back(
        {{"lambda_id", entry.strategy.lambda_id},
         {"weight", entry.weight},
         {"locality", classify(entry.strategy) == LocalityClass::local
                          ? "Local"
                          : "NonLocal"},
         {"canonical_chsh", chsh_value(entry.strategy, setting)}});
  }
  return {{"pass", problems.empty()},
          {"problems", problems},
          {"weight_sum", weight_sum},
          {"nonlocal_weight", nonlocal_weight(ensemble)},
          {"ensemble_chsh", ensemble_chsh(ensemble, setting)},
          {"strategies", std::move(strategies)}};
}

}  // namespace monoqkd

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "monoqkd/ensemble_io.hpp"
#include "monoqkd/harness.hpp"

namespace {

// Config files use the same JSON document format as reports; keys match the
// long flag names.
void apply_config_file(const std::string& path, monoqkd::RunSpec& spec) {
  std::ifstream in(path);
  if (!in) throw monoqkd::ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("seed")) spec.config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("rounds")) spec.config.n_rounds = j["rounds"].get<std::int64_t>();
  if (j.contains("test_fraction")) {
    spec.config.test_fraction = j["test_fraction"].get<double>();
  }
  if (j.contains("K")) spec.config.key_block_size = j["K"].get<int>();
  if (j.contains("chsh_tolerance")) {
    spec.config.chsh_tolerance = j["chsh_tolerance"].get<double>();
  }
  if (j.contains("correlation_tolerance")) {
    spec.config.correlation_tolerance = j["correlation_tolerance"].get<double>();
  }
  if (j.contains("min_cell_samples")) {
    spec.config.min_cell_samples = j["min_cell_samples"].get<std::int64_t>();
  }
  if (j.contains("adversary")) {
    spec.adversary =
        monoqkd::adversary_from_name(j["adversary"].get<std::string>());
  }
  if (j.contains("ensemble")) spec.ensemble_path = j["ensemble"].get<std::string>();
  if (j.contains("report")) spec.report_path = j["report"].get<std::string>();
  if (j.contains("transcript")) {
    spec.transcript_path = j["transcript"].get<std::string>();
  }
  if (j.contains("repetitions")) spec.repetitions = j["repetitions"].get<int>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for a monogamy-based entangled-state QKD protocol"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand(
      "run", "Run the five-step protocol end to end and report");
  monoqkd::RunSpec spec;
  spec.config.n_rounds = 100000;
  std::string config_path;
  std::string adversary = "none";
  run_cmd->add_option("--config", config_path,
                      "JSON config file; explicit flags override it");
  auto* seed_opt = run_cmd->add_option("--seed", spec.config.seed, "Master seed");
  auto* rounds_opt =
      run_cmd->add_option("--rounds", spec.config.n_rounds, "Rounds in Step 1");
  auto* tf_opt = run_cmd->add_option("--test-fraction", spec.config.test_fraction,
                                     "Fraction of rounds revealed in Step 2");
  auto* k_opt = run_cmd->add_option("-K,--key-block-size",
                                    spec.config.key_block_size,
                                    "Bits XORed per key bit (Step 5)");
  auto* chsh_opt = run_cmd->add_option("--chsh-tolerance",
                                       spec.config.chsh_tolerance,
                                       "Allowed | |S| - 2*sqrt(2) |");
  auto* corr_opt = run_cmd->add_option(
      "--correlation-tolerance", spec.config.correlation_tolerance,
      "Allowed deviation from perfect (anti)correlation");
  auto* cell_opt = run_cmd->add_option("--min-cell-samples",
                                       spec.config.min_cell_samples,
                                       "Minimum test rounds per required cell");
  auto* adv_opt = run_cmd->add_option(
      "--adversary", adversary, "none | local_only | critical | custom");
  auto* ens_opt = run_cmd->add_option("--ensemble", spec.ensemble_path,
                                      "Serialized ensemble (custom adversary)");
  auto* report_opt =
      run_cmd->add_option("--report", spec.report_path, "Report output path");
  auto* transcript_opt = run_cmd->add_option("--transcript", spec.transcript_path,
                                             "Transcript output path");
  auto* reps_opt = run_cmd->add_option("--repetitions", spec.repetitions,
                                       "Independent protocol repetitions");

  // validate-ensemble
  auto* validate_cmd = app.add_subcommand(
      "validate-ensemble", "Check a serialized ensemble against the "
                           "constraint identities and weight invariants");
  std::string validate_path;
  validate_cmd->add_option("path", validate_path, "Ensemble file")->required();

  // write-ensemble
  auto* write_cmd = app.add_subcommand(
      "write-ensemble", "Serialize a built-in ensemble to a file");
  std::string write_kind = "critical";
  std::string write_path;
  write_cmd->add_option("--kind", write_kind, "critical | local_only");
  write_cmd->add_option("path", write_path, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      if (!config_path.empty()) {
        monoqkd::RunSpec from_file = spec;
        apply_config_file(config_path, from_file);
        // Flags passed explicitly win over the config file.
        if (seed_opt->count() == 0) spec.config.seed = from_file.config.seed;
        if (rounds_opt->count() == 0) spec.config.n_rounds = from_file.config.n_rounds;
        if (tf_opt->count() == 0) spec.config.test_fraction = from_file.config.test_fraction;
        if (k_opt->count() == 0) spec.config.key_block_size = from_file.config.key_block_size;
        if (chsh_opt->count() == 0) spec.config.chsh_tolerance = from_file.config.chsh_tolerance;
        if (corr_opt->count() == 0) spec.config.correlation_tolerance = from_file.config.correlation_tolerance;
        if (cell_opt->count() == 0) spec.config.min_cell_samples = from_file.config.min_cell_samples;
        if (adv_opt->count() == 0) spec.adversary = from_file.adversary;
        if (ens_opt->count() == 0) spec.ensemble_path = from_file.ensemble_path;
        if (report_opt->count() == 0) spec.report_path = from_file.report_path;
        if (transcript_opt->count() == 0) spec.transcript_path = from_file.transcript_path;
        if (reps_opt->count() == 0) spec.repetitions = from_file.repetitions;
      }
      if (adv_opt->count() > 0 || config_path.empty()) {
        spec.adversary = monoqkd::adversary_from_name(adversary);
      }
      auto outcome = monoqkd::run(spec);
      std::cout << outcome.report.dump(2) << '\n';
      return monoqkd::exit_code(outcome.status);
    }

    if (validate_cmd->parsed()) {
      auto listing = monoqkd::validate_ensemble_file(validate_path);
      std::cout << listing.dump(2) << '\n';
      return listing["pass"].get<bool>() ? 0 : 1;
    }

    if (write_cmd->parsed()) {
      monoqkd::HVEnsemble e;
      if (write_kind == "critical") {
        e = monoqkd::critical_ensemble();
      } else if (write_kind == "local_only") {
        e = monoqkd::local_only_ensemble();
      } else {
        throw monoqkd::ConfigError("unknown ensemble kind: " + write_kind);
      }
      monoqkd::save_ensemble(e, monoqkd::resolve_output_path(write_path));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

#pragma once

#include <string>

#include <json.hpp>

#include "monoqkd/protocol.hpp"
#include "monoqkd/security.hpp"

namespace monoqkd {

enum class AdversaryKind { none, local_only, critical, custom };

const char* adversary_name(AdversaryKind kind);
AdversaryKind adversary_from_name(const std::string& name);

struct RunSpec {
  ProtocolConfig config;
  AdversaryKind adversary = AdversaryKind::none;
  std::string ensemble_path;    // required iff adversary == custom
  std::string report_path;      // optional; "-" or empty: stdout only
  std::string transcript_path;  // optional; first repetition's transcript
  int repetitions = 1;

  void validate() const;  // throws ConfigError
};

enum class RunStatus { completed, aborted_by_protocol, configuration_error };

// 0 completed, 2 aborted-by-protocol, 1 configuration-error.
int exit_code(RunStatus status);

struct RunOutcome {
  RunStatus status = RunStatus::configuration_error;
  nlohmann::json report;
};

// Drives the full protocol plus security analysis for every repetition
// (repetition i runs with seed derive_seed(seed, i); repetition 0 with the
// master seed itself), writes the report and optional transcript, and
// aggregates. Status is aborted_by_protocol iff every repetition aborted.
// Configuration problems surface as configuration_error with the message in
// report["error"].
RunOutcome run(const RunSpec& spec);

// Validation listing for a serialized ensemble: constraint violations,
// weight sum, locality classes, canonical CHSH values, non-local weight.
nlohmann::json validate_ensemble_file(const std::string& path);

// Resolves a path against the MONOQKD_OUTPUT_DIR environment override
// (relative paths only).
std::string resolve_output_path(const std::string& path);

}  // namespace monoqkd

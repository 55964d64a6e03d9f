#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "monoqkd/ensemble_io.hpp"
#include "monoqkd/harness.hpp"
#include "monoqkd/transcript.hpp"

using namespace monoqkd;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path((std::filesystem::temp_directory_path() / name).string()) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("ensemble serialization round-trips") {
  auto e = critical_ensemble();
  auto j = ensemble_to_json(e);
  auto back = ensemble_from_json(j);
  REQUIRE(back.entries.size() == e.entries.size());
  for (std::size_t i = 0; i < e.entries.size(); ++i) {
    CHECK(back.entries[i].strategy.lambda_id == e.entries[i].strategy.lambda_id);
    CHECK(back.entries[i].weight == e.entries[i].weight);  // exact
    CHECK(back.entries[i].strategy.wa == e.entries[i].strategy.wa);
    CHECK(back.entries[i].strategy.wb == e.entries[i].strategy.wb);
  }

  TempFile f("monoqkd_ensemble_test.json");
  save_ensemble(e, f.path);
  auto loaded = load_ensemble(f.path);
  CHECK(ensemble_to_json(loaded) == j);
}

TEST_CASE("ensemble validation catches tampering") {
  SUBCASE("flipped sign table entry is located") {
    auto e = critical_ensemble();
    e.entries[2].strategy.wa[3][5] *= -1;
    auto problems = validate_ensemble(e);
    REQUIRE_FALSE(problems.empty());
    bool names_point = false;
    for (const auto& p : problems) {
      names_point = names_point || p.find("a=3") != std::string::npos;
    }
    CHECK(names_point);
  }

  SUBCASE("weights summing below one are rejected") {
    auto e = critical_ensemble();
    for (auto& entry : e.entries) entry.weight *= 0.9;
    auto problems = validate_ensemble(e);
    REQUIRE_FALSE(problems.empty());
    CHECK(problems.back().find("sum") != std::string::npos);
  }

  SUBCASE("bad table values fail to parse") {
    auto j = ensemble_to_json(critical_ensemble());
    j["entries"][0]["wa"][0][0] = 3;
    CHECK_THROWS(ensemble_from_json(j));
  }
}

TEST_CASE("transcript lines round-trip") {
  Transcript t;
  t.push_back({Sender::alice, MsgKind::basis_reveal_full, 7, 2, 4, 0, -1, -1, {}});
  t.push_back({Sender::bob, MsgKind::outcome_reveal, 7, -1, -1, -1, -1, -1, {}});
  t.push_back({Sender::alice, MsgKind::phi_reveal, 9, 3, -1, 0, -1, -1, {}});
  t.push_back({Sender::referee, MsgKind::role_assignment, 9, -1, -1, 0, -1, 1, {}});
  t.push_back({Sender::bob, MsgKind::encoded_bit, 9, -1, 4, 0, 1, -1, {}});
  t.push_back({Sender::referee, MsgKind::abort, -1, -1, -1, 0, -1, -1, "chsh"});

  std::stringstream buf;
  write_transcript(buf, t);
  auto back = read_transcript(buf);
  REQUIRE(back.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(to_line(back[i]) == to_line(t[i]));
  }
}

TEST_CASE("validate_ensemble_file reports the critical mixture") {
  TempFile f("monoqkd_critical.json");
  save_ensemble(critical_ensemble(), f.path);
  auto listing = validate_ensemble_file(f.path);
  CHECK(listing["pass"].get<bool>());
  CHECK(std::abs(listing["nonlocal_weight"].get<double>() -
                 (std::numbers::sqrt2 - 1.0)) < 1e-12);
  CHECK(std::abs(listing["weight_sum"].get<double>() - 1.0) < 1e-12);
  for (const auto& s : listing["strategies"]) {
    double v = s["canonical_chsh"].get<double>();
    CHECK((v == -2.0 || v == -4.0));
  }
}

TEST_CASE("harness run statuses") {
  RunSpec spec;
  spec.config.seed = 2024;
  spec.config.n_rounds = 50000;
  spec.config.chsh_tolerance = 0.15;

  SUBCASE("honest run completes and omits p") {
    auto outcome = run(spec);
    CHECK(outcome.status == RunStatus::completed);
    CHECK(exit_code(outcome.status) == 0);
    const auto& sec = outcome.report["repetitions"][0]["security"];
    CHECK_FALSE(sec["lambda_channel"].get<bool>());
    CHECK_FALSE(sec.contains("p_empirical"));
    CHECK(outcome.report["repetitions"][0]["key"]["block_mismatches"]
              .get<std::int64_t>() == 0);
  }

  SUBCASE("local-only adversary is aborted") {
    spec.adversary = AdversaryKind::local_only;
    auto outcome = run(spec);
    CHECK(outcome.status == RunStatus::aborted_by_protocol);
    CHECK(exit_code(outcome.status) == 2);
  }

  SUBCASE("critical adversary completes with p present") {
    spec.adversary = AdversaryKind::critical;
    auto outcome = run(spec);
    CHECK(outcome.status == RunStatus::completed);
    const auto& sec = outcome.report["repetitions"][0]["security"];
    CHECK(sec.contains("p_empirical"));
    CHECK(sec["soundness_counterexamples"].get<std::int64_t>() == 0);
  }

  SUBCASE("bad spec is a configuration error") {
    spec.adversary = AdversaryKind::custom;  // no ensemble path
    auto outcome = run(spec);
    CHECK(outcome.status == RunStatus::configuration_error);
    CHECK(exit_code(outcome.status) == 1);
  }

  SUBCASE("identical specs produce byte-identical reports") {
    spec.adversary = AdversaryKind::critical;
    spec.repetitions = 3;
    auto a = run(spec);
    auto b = run(spec);
    CHECK(a.report.dump() == b.report.dump());
  }
}

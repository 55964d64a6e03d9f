#include "monoqkd/ensemble_io.hpp"

#include <fstream>
#include <stdexcept>

namespace monoqkd {

namespace {

nlohmann::json table_to_json(const SignTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (int a = 0; a < kGridSize; ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (int b = 0; b < kGridSize; ++b) row.push_back(static_cast<int>(t[a][b]));
    rows.push_back(std::move(row));
  }
  return rows;
}

SignTable table_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != kGridSize) {
    throw std::runtime_error("sign table must have 9 rows");
  }
  SignTable t;
  for (int a = 0; a < kGridSize; ++a) {
    if (!j[a].is_array() || j[a].size() != kGridSize) {
      throw std::runtime_error("sign table row must have 9 entries");
    }
    for (int b = 0; b < kGridSize; ++b) {
      int v = j[a][b].get<int>();
      if (v != +1 && v != -1) {
        throw std::runtime_error("sign table entry must be +1 or -1");
      }
      t[a][b] = static_cast<std::int8_t>(v);
    }
  }
  return t;
}

}  // namespace

nlohmann::json ensemble_to_json(const HVEnsemble& e) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& entry : e.entries) {
    entries.push_back({{"lambda_id", entry.strategy.lambda_id},
                       {"weight", entry.weight},
                       {"wa", table_to_json(entry.strategy.wa)},
                       {"wb", table_to_json(entry.strategy.wb)}});
  }
  return {{"entries", std::move(entries)}};
}

HVEnsemble ensemble_from_json(const nlohmann::json& j) {
  HVEnsemble e;
  for (const auto& item : j.at("entries")) {
    HVEnsemble::Entry entry;
    entry.strategy.lambda_id = item.at("lambda_id").get<std::string>();
    entry.strategy.wa = table_from_json(item.at("wa"));
    entry.strategy.wb = table_from_json(item.at("wb"));
    entry.weight = item.at("weight").get<double>();
    e.entries.push_back(std::move(entry));
  }
  return e;
}

void save_ensemble(const HVEnsemble& e, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << ensemble_to_json(e).dump(2) << '\n';
}

HVEnsemble load_ensemble(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  in >> j;
  return ensemble_from_json(j);
}

}  // namespace monoqkd

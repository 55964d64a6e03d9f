#pragma once

#include <string>

#include <json.hpp>

#include "monoqkd/strategy.hpp"

namespace monoqkd {

// Document format: {"entries": [{"lambda_id", "weight", "wa", "wb"}, ...]},
// tables as 9x9 arrays of +-1 with rows indexed by the a-grid and columns by
// the b-grid. Weights round-trip exactly (shortest representation that
// preserves the double).
nlohmann::json ensemble_to_json(const HVEnsemble& e);
HVEnsemble ensemble_from_json(const nlohmann::json& j);

void save_ensemble(const HVEnsemble& e, const std::string& path);
HVEnsemble load_ensemble(const std::string& path);

}  // namespace monoqkd

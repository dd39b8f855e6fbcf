#pragma once

#include <string>

#include <json.hpp>

#include "lite_rvfl/incremental.hpp"

namespace lite_rvfl {

inline constexpr int kSnapshotVersion = 1;

// {"format": "lite-rvfl-state", "version": 1, "mode", "scheme", "lambda",
//  "absorbed", "dim", "classes", "inverse", "moment", "weights"}; matrices are
// row-major flat arrays. Doubles are written shortest-round-trip, so restore()
// reproduces every bit.
nlohmann::json snapshot(const IncrementalState& state);
IncrementalState restore(const nlohmann::json& doc);

nlohmann::json scheme_to_json(const WeightScheme& scheme);
WeightScheme scheme_from_json(const nlohmann::json& doc);

}  // namespace lite_rvfl

#pragma once

#include <json.hpp>

#include "npidob/harness.hpp"
#include "npidob/stability.hpp"

namespace npidob {

nlohmann::json to_json(const Matrix2& m);
nlohmann::json to_json(const StabilityReport& r);
nlohmann::json to_json(const RunMetrics& m);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const ConsistencyReport& r);

}  // namespace npidob

#pragma once

#include <json.hpp>

namespace eci {

// Insertion-ordered objects: model files keep variable order, and reports
// come out with keys in a fixed order on every run.
using Json = nlohmann::ordered_json;

}  // namespace eci

#pragma once

// JSON documents for sources and metrics:
//   JointSource:      {"alphabets":[nx,ny1,ny2], "labels":[[...],[...],[...]], "pmf":[row-major reals]}
//   DistortionMetric: {"rows":r, "cols":c, "entries":[reals or "inf"], "d_max":optional}

#include <json.hpp>

#include "crrd/prob_core.hpp"

namespace crrd::io {

nlohmann::json to_json(const prob::JointSource& source);
prob::JointSource source_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const prob::DistortionMetric& metric);
prob::DistortionMetric metric_from_json(const nlohmann::json& doc);

} // namespace crrd::io

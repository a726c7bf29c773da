#pragma once

#include "contrastfs/core.hpp"
#include "contrastfs/evaluation.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace contrastfs {

using Json = nlohmann::ordered_json;

inline constexpr int report_format_version = 1;

/// {"version", "method", "config", "scores", "ranking", "wall_time_seconds"[, "selected"]}
/// Doubles are written in shortest round-trip form, so scores survive
/// parse(dump(report)) bit for bit.
Json to_json(const ImportanceReport& report, std::span<const FeatureIndex> selected = {});
ImportanceReport report_from_json(const Json& json);
/// "selected" of a report document, if present.
std::optional<std::vector<FeatureIndex>> selected_from_json(const Json& json);

/// {"version", "config", "classes", "features", "z": [[...] per class]}
Json to_json(const SurrogateMatrix& surrogate);
SurrogateMatrix surrogate_from_json(const Json& json);

Json to_json(const TimingStats& stats);
Json to_json(const CurveStudy& study);

/// Throws Io on failure. Output ends with a newline.
void write_json(const Json& json, const std::string& path);
Json read_json(const std::string& path);

}  // namespace contrastfs

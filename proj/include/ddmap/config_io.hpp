#pragma once

// PipelineConfig <-> JSON tree, with dotted-path overrides.
//
//   {"mode": "ecg",
//    "preprocess": {...}, "detector": {...}, "rejection": {...},
//    "window": {...}, "normalize": {...}, "kernel": {...}, "trace": {...}}
//
// Parsing starts from the preset named by "mode" and rejects unknown keys.

#include <string>
#include <string_view>

#include <json.hpp>

#include "ddmap/dynamics_recovery.hpp"

namespace ddmap {

using Json = nlohmann::ordered_json;

/// Every field, defaults included.
Json config_to_json(const PipelineConfig& config);

/// Preset for tree["mode"] (default "custom") patched with the tree.
/// Throws ConfigError on unknown keys or ill-typed values.
PipelineConfig config_from_json(const Json& tree);

/// Applies "a.b.c=value". The value is parsed as JSON when possible and
/// kept as a string otherwise.
void apply_override(Json& tree, std::string_view assignment);

Json bandwidth_to_json(const BandwidthRule& rule);
BandwidthRule bandwidth_from_json(const Json& j);

}  // namespace ddmap

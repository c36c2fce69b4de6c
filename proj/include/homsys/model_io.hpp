#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "homsys/models.hpp"

namespace homsys {

/// Schema:
///   {"name": str, "atoms": [{"weight": w, "family": tag, ...params}]}
/// Family tags and their parameters:
///   sum, parallel, max, min, hipster+, hipster-   (none)
///   power_mean                                    alpha
///   tent                                          s_plus, s_minus, eps (default +1)
///   table                                         eps, lo, hi, values
nlohmann::json to_json(const HFunction& f);
HFunction function_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelSpec& m);
ModelSpec model_from_json(const nlohmann::json& j);

/// A builtin name (see builtin) or a path to a JSON spec file.
ModelSpec load_model(const std::string& spec);

/// FNV-1a over the canonical JSON dump, as 16 hex digits.
std::string model_hash(const ModelSpec& m);

}  // namespace homsys
